#include "rswz/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rswz/errors.hpp"
#include "rswz/lamperti.hpp"

namespace rswz {

namespace {

double checked_eval(const Coefficient& f, Regime i, double t, double x, const char* name) {
  const double val = f(t, x);
  if (!std::isfinite(val)) {
    char msg[160];
    std::snprintf(msg, sizeof(msg), "%s returned non-finite value at regime %d, t=%.17g, x=%.17g",
                  name, i, t, x);
    throw EvaluationError(msg);
  }
  return val;
}

}  // namespace

ValidationReport validate_assumptions(const CoefficientSet& model, const Grid2d& grid) {
  if (grid.nt < 2 || grid.nx < 2 || grid.t_hi <= grid.t_lo || grid.x_hi <= grid.x_lo)
    throw ConfigError("validate_assumptions: degenerate grid");
  if (model.regimes.empty()) throw ConfigError("validate_assumptions: empty model");

  ValidationReport rep;
  {
    char buf[160];
    std::snprintf(buf, sizeof(buf), "[%g,%g]x[%g,%g], %dx%d", grid.t_lo, grid.t_hi, grid.x_lo,
                  grid.x_hi, grid.nt, grid.nx);
    rep.grid_desc = buf;
  }
  rep.sigma_min = 1e300;
  rep.sigma_max = -1e300;
  const double dt = (grid.t_hi - grid.t_lo) / (grid.nt - 1);
  const double dx = (grid.x_hi - grid.x_lo) / (grid.nx - 1);
  const double fd_h = 1e-5;
  const double fd_tol = 1e-4;

  for (Regime i = 0; i < model.n_regimes(); ++i) {
    const RegimeCoefficients& c = model.regimes[static_cast<size_t>(i)];
    for (int a = 0; a < grid.nt; ++a) {
      const double t = grid.t_lo + a * dt;
      for (int b = 0; b < grid.nx; ++b) {
        const double x = grid.x_lo + b * dx;
        const double s = checked_eval(c.sigma, i, t, x, "sigma");
        checked_eval(c.mu, i, t, x, "mu");
        const double d1 = checked_eval(c.d1_sigma, i, t, x, "d1_sigma");
        const double d2 = checked_eval(c.d2_sigma, i, t, x, "d2_sigma");

        rep.sigma_min = std::min(rep.sigma_min, s);
        rep.sigma_max = std::max(rep.sigma_max, s);
        if (!(model.v < s && s < model.V)) {
          rep.sigma_bounds_ok = false;
          rep.violations.push_back({"sigma outside (v, V)", i, t, x, s,
                                    s <= model.v ? model.v : model.V});
        }
        const double ratio = std::abs(d1) / (s * s);
        rep.max_k_ratio = std::max(rep.max_k_ratio, ratio);
        if (ratio > model.K) {
          rep.k_bound_ok = false;
          rep.violations.push_back({"|d1_sigma|/sigma^2 above K", i, t, x, ratio, model.K});
        }
        const double fd1 = (c.sigma(t + fd_h, x) - c.sigma(t - fd_h, x)) / (2.0 * fd_h);
        const double e1 = std::abs(fd1 - d1);
        rep.max_d1_err = std::max(rep.max_d1_err, e1);
        if (e1 > fd_tol * (1.0 + std::abs(d1))) {
          rep.d1_consistent_ok = false;
          rep.violations.push_back({"d1_sigma finite-difference mismatch", i, t, x, fd1, d1});
        }
        const double fd2 = (c.sigma(t, x + fd_h) - c.sigma(t, x - fd_h)) / (2.0 * fd_h);
        const double e2 = std::abs(fd2 - d2);
        rep.max_d2_err = std::max(rep.max_d2_err, e2);
        if (e2 > fd_tol * (1.0 + std::abs(d2))) {
          rep.d2_consistent_ok = false;
          rep.violations.push_back({"d2_sigma finite-difference mismatch", i, t, x, fd2, d2});
        }
      }
    }
  }
  return rep;
}

double estimate_mstar(const CoefficientSet& model, Regime i, const Grid2d& grid) {
  if (i < 0 || i >= model.n_regimes()) throw ConfigError("estimate_mstar: bad regime index");
  LampertiKit kit{&model};
  const double dt = (grid.t_hi - grid.t_lo) / (grid.nt - 1);
  const double dl = (grid.x_hi - grid.x_lo) / (grid.nx - 1);
  double worst = 0.0;
  for (int a = 0; a < grid.nt; ++a) {
    const double t = grid.t_lo + a * dt;
    double prev = kit.mu_star(i, t, grid.x_lo);
    for (int b = 1; b < grid.nx; ++b) {
      const double ell = grid.x_lo + b * dl;
      const double cur = kit.mu_star(i, t, ell);
      worst = std::max(worst, std::abs(cur - prev) / dl);
      prev = cur;
    }
  }
  return worst;
}

CoefficientSet preset_constant(const std::vector<double>& mu, const std::vector<double>& sigma,
                               double x0) {
  if (mu.size() != sigma.size() || mu.empty())
    throw ConfigError("preset_constant: mu and sigma must have equal nonzero length");
  CoefficientSet m;
  double smin = 1e300, smax = -1e300;
  for (size_t i = 0; i < mu.size(); ++i) {
    if (sigma[i] <= 0.0) throw ConfigError("preset_constant: sigma must be positive");
    const double mi = mu[i];
    const double si = sigma[i];
    m.regimes.push_back({[mi](double, double) { return mi; },
                         [si](double, double) { return si; },
                         [](double, double) { return 0.0; },
                         [](double, double) { return 0.0; }});
    smin = std::min(smin, si);
    smax = std::max(smax, si);
    m.mstar.push_back(0.0);
  }
  m.v = 0.9 * smin;
  m.V = 1.1 * smax;
  m.K = 0.1;
  m.x0 = x0;
  return m;
}

CoefficientSet preset_mmbm() {
  CoefficientSet m = preset_constant({1.0, -1.0}, {1.0, 2.0});
  m.v = 0.9;
  m.V = 2.1;
  m.K = 0.1;
  return m;
}

CoefficientSet preset_sin(double amp0, double amp1, double x0) {
  const double amax = std::max(std::abs(amp0), std::abs(amp1));
  if (amax >= 2.0) throw ConfigError("preset_sin: |amplitude| must be below 2");
  CoefficientSet m;
  for (double a : {amp0, amp1}) {
    m.regimes.push_back({[](double, double) { return 0.0; },
                         [a](double, double x) { return 2.0 + a * std::sin(x); },
                         [](double, double) { return 0.0; },
                         [a](double, double x) { return a * std::cos(x); }});
    // |d/dl mu*| = |a/2 sin(x)| * sigma(x) <= |a|/2 * (2 + |a|), padded.
    m.mstar.push_back(0.5 * std::abs(a) * (2.0 + std::abs(a)) + 0.1);
  }
  m.v = (2.0 - amax) * 0.9;
  m.V = (2.0 + amax) + 0.1;
  m.K = 1.0;
  m.x0 = x0;
  return m;
}

CoefficientSet preset_time_arctan() {
  CoefficientSet m;
  for (double a : {1.0, -1.0}) {
    m.regimes.push_back({[](double, double) { return 0.0; },
                         [a](double t, double) { return 2.0 + a * std::atan(t) / M_PI; },
                         [a](double t, double) { return a / (M_PI * (1.0 + t * t)); },
                         [](double, double) { return 0.0; }});
    m.mstar.push_back(0.2);
  }
  m.v = 1.7;
  m.V = 2.3;
  m.K = 0.1;
  m.x0 = 0.0;
  return m;
}

}  // namespace rswz
