#include "rswz/specfun.hpp"

#include <cmath>
#include <cstdio>

#include "rswz/errors.hpp"

namespace rswz {

namespace {

double w_residual(double w, double x) { return w * std::exp(w) - x; }

double initial_guess(double x) {
  if (x > M_E) {
    // Asymptotic: W ~ L1 - L2 + L2/L1.
    double l1 = std::log(x);
    double l2 = std::log(l1);
    return l1 - l2 + l2 / l1;
  }
  if (x < -0.25) {
    // Branch-point series in p = sqrt(2(ex+1)).
    double p = std::sqrt(2.0 * (M_E * x + 1.0));
    return -1.0 + p - p * p / 3.0 + 11.0 * p * p * p / 72.0;
  }
  // Small |x|: W ~ x(1 - x + 3x^2/2).
  return x * (1.0 - x + 1.5 * x * x);
}

}  // namespace

WResult lambert_w0(double x) {
  const double x_min = -std::exp(-1.0);
  if (x < x_min) {
    char msg[96];
    std::snprintf(msg, sizeof(msg), "lambert_w0: x = %.17g below -1/e", x);
    throw DomainError(msg);
  }
  WResult r;
  if (x == 0.0) {
    r.value = 0.0;
    r.residual = 0.0;
    return r;
  }
  const double tol = 1e-13 * std::fmax(1.0, std::abs(x));
  if (x - x_min < 1e-15) {
    r.value = -1.0;
    r.residual = std::abs(w_residual(-1.0, x));
    return r;
  }

  double w = initial_guess(x);
  if (w < -1.0) w = -1.0 + 1e-12;
  for (int it = 1; it <= 50; ++it) {
    r.iterations = it;
    const double ew = std::exp(w);
    const double f = w * ew - x;
    if (std::abs(f) <= tol) {
      r.value = w;
      r.residual = std::abs(f);
      return r;
    }
    // Halley step.
    const double fp = ew * (w + 1.0);
    const double denom = fp - f * (w + 2.0) / (2.0 * (w + 1.0));
    double step = (denom != 0.0) ? f / denom : f / fp;
    double w_next = w - step;
    if (w_next < -1.0) w_next = 0.5 * (w - 1.0);
    w = w_next;
  }
  // Bisection fallback on the monotone branch w >= -1.
  double lo = -1.0;
  double hi = (x > M_E) ? std::log(x) + 1.0 : 1.0;
  while (w_residual(hi, x) < 0.0) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    ++r.iterations;
    double mid = 0.5 * (lo + hi);
    if (w_residual(mid, x) < 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-16 * std::fmax(1.0, std::abs(lo))) break;
  }
  w = 0.5 * (lo + hi);
  r.value = w;
  r.residual = std::abs(w_residual(w, x));
  return r;
}

double f_gamma_q_log(double gamma, double q, double x) {
  if (q <= 0.0) throw DomainError("f_gamma_q: q must be positive");
  if (x < std::exp(gamma)) {
    char msg[112];
    std::snprintf(msg, sizeof(msg), "f_gamma_q: x = %.17g below e^gamma = %.17g", x,
                  std::exp(gamma));
    throw DomainError(msg);
  }
  return x * (std::log(x) - gamma) / q;
}

double f_gamma_q(double gamma, double q, double x) {
  return std::exp(f_gamma_q_log(gamma, q, x));
}

double f_inverse_from_log(double gamma, double q, double log_y) {
  if (q <= 0.0) throw DomainError("f_inverse: q must be positive");
  if (log_y < 0.0) throw DomainError("f_inverse: y must be >= 1");
  const WResult w = lambert_w0(q * std::exp(-gamma) * log_y);
  return std::exp(gamma) * std::exp(w.value);
}

double f_inverse(double gamma, double q, double y) {
  if (y < 1.0) throw DomainError("f_inverse: y must be >= 1");
  return f_inverse_from_log(gamma, q, std::log(y));
}

}  // namespace rswz
