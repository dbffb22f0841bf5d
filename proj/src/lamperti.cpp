#include "rswz/lamperti.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rswz/errors.hpp"
#include "rswz/quadrature.hpp"

namespace rswz {

namespace {

const RegimeCoefficients& coeff(const CoefficientSet* m, Regime i) {
  if (!m) throw ConfigError("LampertiKit: no model attached");
  if (i < 0 || i >= m->n_regimes()) throw ConfigError("LampertiKit: bad regime index");
  return m->regimes[static_cast<size_t>(i)];
}

}  // namespace

double LampertiKit::h(Regime i, double t, double x) const {
  const RegimeCoefficients& c = coeff(model, i);
  auto f = [&](double y) { return 1.0 / c.sigma(t, y); };
  return integrate(f, model->x0, x, quad_tol).value;
}

double LampertiKit::d1_h(Regime i, double t, double x) const {
  const RegimeCoefficients& c = coeff(model, i);
  auto f = [&](double y) {
    const double s = c.sigma(t, y);
    return c.d1_sigma(t, y) / (s * s);
  };
  return -integrate(f, model->x0, x, quad_tol).value;
}

double LampertiKit::h_inv(Regime i, double t, double ell, double hint) const {
  const RegimeCoefficients& c = coeff(model, i);
  const double x0 = model->x0;
  // v <= sigma <= V pins h between (x-x0)/V and (x-x0)/v, so the preimage of
  // ell lies in [x0 + v*ell, x0 + V*ell] (order depending on the sign).
  double lo = x0 + ((ell >= 0.0) ? model->v * ell : model->V * ell);
  double hi = x0 + ((ell >= 0.0) ? model->V * ell : model->v * ell);
  if (lo > hi) std::swap(lo, hi);
  {
    const double pad = 4.0 * root_tol + 1e-15 * std::abs(ell);
    lo -= pad;
    hi += pad;
  }
  double x = hint;
  if (!(x >= lo && x <= hi)) x = 0.5 * (lo + hi);
  double r = h(i, t, x) - ell;
  for (int it = 0; it < 100; ++it) {
    if (std::abs(r) <= root_tol) return x;
    if (r > 0.0)
      hi = x;
    else
      lo = x;
    double x_next = x - r * c.sigma(t, x);  // Newton: dh/dx = 1/sigma
    if (!(x_next > lo && x_next < hi)) x_next = 0.5 * (lo + hi);
    x = x_next;
    r = h(i, t, x) - ell;
  }
  char msg[160];
  std::snprintf(msg, sizeof(msg),
                "h_inv: no convergence at regime %d, t=%.17g, ell=%.17g (residual %.3e); "
                "check the declared diffusion bounds",
                i, t, ell, r);
  throw NumericError(msg);
}

double LampertiKit::h_inv(Regime i, double t, double ell) const {
  const double x0 = model->x0;
  double lo = x0 + ((ell >= 0.0) ? model->v * ell : model->V * ell);
  double hi = x0 + ((ell >= 0.0) ? model->V * ell : model->v * ell);
  if (lo > hi) std::swap(lo, hi);
  {
    const double pad = 4.0 * root_tol + 1e-15 * std::abs(ell);
    lo -= pad;
    hi += pad;
  }
  double flo = h(i, t, lo) - ell;
  double fhi = h(i, t, hi) - ell;
  if (flo > 0.0 || fhi < 0.0) {
    char msg[200];
    std::snprintf(msg, sizeof(msg),
                  "h_inv: bracket failure at regime %d, t=%.17g, ell=%.17g "
                  "(h(lo)-ell=%.3e, h(hi)-ell=%.3e); declared v/V likely violated",
                  i, t, ell, flo, fhi);
    throw NumericError(msg);
  }
  // Bisection to a narrow interval, then Newton polish via the hint overload.
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    if (h(i, t, mid) - ell > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return h_inv(i, t, ell, 0.5 * (lo + hi));
}

double LampertiKit::mu_star(Regime i, double t, double ell, double* x_hint_io) const {
  const RegimeCoefficients& c = coeff(model, i);
  const double x = (x_hint_io != nullptr) ? h_inv(i, t, ell, *x_hint_io) : h_inv(i, t, ell);
  if (x_hint_io != nullptr) *x_hint_io = x;
  const double s = c.sigma(t, x);
  return d1_h(i, t, x) + c.mu(t, x) / s - 0.5 * c.d2_sigma(t, x);
}

double LampertiKit::mu_star(Regime i, double t, double ell) const {
  return mu_star(i, t, ell, nullptr);
}

double LampertiKit::jump_reset(Regime i_prev, Regime i_new, double t, double s_minus) const {
  return h(i_new, t, h_inv(i_prev, t, s_minus));
}

}  // namespace rswz
