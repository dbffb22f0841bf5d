#include "rswz/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rswz/errors.hpp"

namespace rswz {

namespace {

size_t index_of(const std::vector<double>& times, double t, const char* ctx) {
  const auto it = std::lower_bound(times.begin(), times.end(), t);
  if (it == times.end() || *it != t) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "%s: required time %.17g missing from the grid", ctx, t);
    throw ConfigError(msg);
  }
  return static_cast<size_t>(it - times.begin());
}

void check_finite(double x, double t, const char* ctx) {
  if (!std::isfinite(x)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg), "%s: solution blew up at t = %.17g", ctx, t);
    throw NumericError(msg);
  }
}

}  // namespace

PathView make_view(const BrownianPath& b) {
  return PathView{b.grid, b.values, false};
}

PathView make_view(const DriverPath& f, const std::vector<double>& sample_times) {
  return PathView{sample_times, f.sample(sample_times), true};
}

SolutionPath euler_maruyama_rs(const CoefficientSet& model, const JumpPath& jumps,
                               const BrownianPath& b) {
  SolutionPath out;
  out.label = SolutionPath::X;
  out.times = b.grid;
  out.values.resize(b.grid.size());
  out.regime.resize(b.grid.size());
  for (size_t n = 1; n < jumps.epochs.size(); ++n)
    out.epoch_index.push_back(index_of(b.grid, jumps.epochs[n], "euler_maruyama_rs"));

  double x = model.x0;
  size_t next_epoch = 1;
  Regime j = jumps.regimes[0];
  for (size_t k = 0; k < b.grid.size(); ++k) {
    const double t = b.grid[k];
    if (next_epoch < jumps.epochs.size() && t >= jumps.epochs[next_epoch]) {
      j = jumps.regimes[next_epoch];
      ++next_epoch;
    }
    out.values[k] = x;
    out.regime[k] = j;
    if (k + 1 < b.grid.size()) {
      const double dt = b.grid[k + 1] - b.grid[k];
      const double dB = b.values[k + 1] - b.values[k];
      const RegimeCoefficients& c = model.regimes[static_cast<size_t>(j)];
      x += c.mu(t, x) * dt + c.sigma(t, x) * dB;
      check_finite(x, b.grid[k + 1], "euler_maruyama_rs");
    }
  }
  for (size_t idx : out.epoch_index) out.left_limits.push_back(out.values[idx]);
  return out;
}

SolutionPath wz_ode_solve(const CoefficientSet& model, const JumpPath& jumps, const DriverPath& f,
                          double step, bool corrected) {
  if (!(step > 0.0)) throw ConfigError("wz_ode_solve: step must be positive");
  std::vector<double> uniform;
  const long n = std::lround(f.T / step);
  for (long k = 0; k <= n; ++k) uniform.push_back(static_cast<double>(k) * step);
  if (uniform.empty() || std::abs(uniform.back() - f.T) > 1e-12) uniform.push_back(f.T);
  uniform.back() = f.T;
  std::vector<double> epochs_in(jumps.epochs.begin(), jumps.epochs.end());
  const std::vector<double> grid = merge_grids({uniform, f.breakpoints, epochs_in});
  const std::vector<double> fv = f.sample(grid);

  SolutionPath out;
  out.label = SolutionPath::X_lambda;
  out.times = grid;
  out.values.resize(grid.size());
  out.regime.resize(grid.size());
  for (size_t m = 1; m < jumps.epochs.size(); ++m)
    out.epoch_index.push_back(index_of(grid, jumps.epochs[m], "wz_ode_solve"));

  double x = model.x0;
  size_t next_epoch = 1;
  Regime j = jumps.regimes[0];
  for (size_t k = 0; k < grid.size(); ++k) {
    const double t = grid[k];
    if (next_epoch < jumps.epochs.size() && t >= jumps.epochs[next_epoch]) {
      j = jumps.regimes[next_epoch];
      ++next_epoch;
    }
    out.values[k] = x;
    out.regime[k] = j;
    if (k + 1 < grid.size()) {
      const double h = grid[k + 1] - grid[k];
      const double s = (fv[k + 1] - fv[k]) / h;
      const RegimeCoefficients& c = model.regimes[static_cast<size_t>(j)];
      const auto g = [&](double tt, double xx) {
        const double sig = c.sigma(tt, xx);
        const double drift = c.mu(tt, xx) - (corrected ? 0.5 * sig * c.d2_sigma(tt, xx) : 0.0);
        return drift + sig * s;
      };
      const double k1 = g(t, x);
      const double k2 = g(t + 0.5 * h, x + 0.5 * h * k1);
      const double k3 = g(t + 0.5 * h, x + 0.5 * h * k2);
      const double k4 = g(t + h, x + h * k3);
      x += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      check_finite(x, grid[k + 1], "wz_ode_solve");
    }
  }
  for (size_t idx : out.epoch_index) out.left_limits.push_back(out.values[idx]);
  return out;
}

std::vector<double> lamperti_flow(const DriftFn& drift, double b_start, double r, double dur,
                                  const PathView& w) {
  const size_t k0 = index_of(w.times, r, "lamperti_flow");
  const size_t k1 = index_of(w.times, r + dur, "lamperti_flow");
  const double w_r = w.values[k0];
  std::vector<double> y(k1 - k0 + 1);
  y[0] = b_start;
  double x_hint = 0.0;
  bool have_hint = false;
  for (size_t k = k0; k < k1; ++k) {
    const double t = w.times[k];
    const double h = w.times[k + 1] - w.times[k];
    const double w_lo = w.values[k] - w_r;
    const double w_hi = w.values[k + 1] - w_r;
    const double w_mid = 0.5 * (w_lo + w_hi);
    double* hint = have_hint ? &x_hint : nullptr;
    const double cur = y[k - k0];
    const double f1 = drift(t, cur + w_lo, hint);
    have_hint = true;
    const double f2 = drift(t + 0.5 * h, cur + 0.5 * h * f1 + w_mid, &x_hint);
    const double f3 = drift(t + 0.5 * h, cur + 0.5 * h * f2 + w_mid, &x_hint);
    const double f4 = drift(t + h, cur + h * f3 + w_hi, &x_hint);
    const double next = cur + h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
    check_finite(next, t + h, "lamperti_flow");
    y[k - k0 + 1] = next;
  }
  return y;
}

std::vector<double> lamperti_flow(const LampertiKit& kit, Regime i, double b_start, double r,
                                  double dur, const PathView& w) {
  DriftFn drift = [&kit, i](double t, double ell, double* hint) {
    return kit.mu_star(i, t, ell, hint);
  };
  return lamperti_flow(drift, b_start, r, dur, w);
}

SolutionPath build_S(const LampertiKit& kit, const JumpPath& jumps, const PathView& w) {
  SolutionPath out;
  out.label = w.finite_variation ? SolutionPath::S_lambda : SolutionPath::S;
  out.times = w.times;
  out.values.resize(w.times.size());
  out.regime.resize(w.times.size());

  const size_t n_epochs = jumps.epochs.size();
  std::vector<size_t> eidx(n_epochs);
  eidx[0] = 0;
  for (size_t n = 1; n < n_epochs; ++n)
    eidx[n] = index_of(w.times, jumps.epochs[n], "build_S");

  double spstart = 0.0;  // S at the current segment start; h(j0, 0, x0) = 0
  double x_hint = kit.model->x0;
  for (size_t n = 0; n < n_epochs; ++n) {
    const size_t a = eidx[n];
    const size_t b = (n + 1 < n_epochs) ? eidx[n + 1] : w.times.size() - 1;
    const Regime j = jumps.regimes[n];
    out.values[a] = spstart;
    out.regime[a] = j;
    if (a == b) continue;

    DriftFn drift = [&kit, j](double t, double ell, double* hint) {
      return kit.mu_star(j, t, ell, hint);
    };
    // Integrate the displaced ODE across this segment, threading the
    // untransformed state as a root-finding hint.
    const double w_a = w.values[a];
    std::vector<double> y(b - a + 1);
    y[0] = spstart;
    for (size_t k = a; k < b; ++k) {
      const double t = w.times[k];
      const double h = w.times[k + 1] - w.times[k];
      const double w_lo = w.values[k] - w_a;
      const double w_hi = w.values[k + 1] - w_a;
      const double w_mid = 0.5 * (w_lo + w_hi);
      const double cur = y[k - a];
      const double f1 = drift(t, cur + w_lo, &x_hint);
      const double f2 = drift(t + 0.5 * h, cur + 0.5 * h * f1 + w_mid, &x_hint);
      const double f3 = drift(t + 0.5 * h, cur + 0.5 * h * f2 + w_mid, &x_hint);
      const double f4 = drift(t + h, cur + h * f3 + w_hi, &x_hint);
      const double next = cur + h / 6.0 * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
      check_finite(next, t + h, "build_S");
      y[k - a + 1] = next;
      out.values[k + 1] = next + (w.values[k + 1] - w_a);
      out.regime[k + 1] = j;
    }
    if (n + 1 < n_epochs) {
      const double s_minus = out.values[b];
      const double t_next = w.times[b];
      out.epoch_index.push_back(b);
      out.left_limits.push_back(s_minus);
      const double x_at_epoch = kit.h_inv(j, t_next, s_minus, x_hint);
      x_hint = x_at_epoch;
      spstart = kit.h(jumps.regimes[n + 1], t_next, x_at_epoch);
      out.values[b] = spstart;
      out.regime[b] = jumps.regimes[n + 1];
    }
  }
  return out;
}

SolutionPath inverse_transform(const LampertiKit& kit, const JumpPath& jumps,
                               const SolutionPath& s) {
  if (s.label != SolutionPath::S && s.label != SolutionPath::S_lambda)
    throw ConfigError("inverse_transform: input must be an S or S_lambda path");
  SolutionPath out;
  out.label = (s.label == SolutionPath::S) ? SolutionPath::X : SolutionPath::X_lambda;
  out.times = s.times;
  out.regime = s.regime;
  out.epoch_index = s.epoch_index;
  out.values.resize(s.times.size());

  double hint = kit.model->x0;
  size_t e = 0;
  for (size_t k = 0; k < s.times.size(); ++k) {
    const double x = kit.h_inv(s.regime[k], s.times[k], s.values[k], hint);
    out.values[k] = x;
    hint = x;
    if (e < s.epoch_index.size() && s.epoch_index[e] == k) ++e;
  }
  // Left limits via the pre-jump regime; by the reset construction these agree
  // with the epoch values up to root-finding tolerance.
  for (size_t e2 = 0; e2 < s.epoch_index.size(); ++e2) {
    const size_t idx = s.epoch_index[e2];
    const Regime j_prev = (idx > 0) ? s.regime[idx - 1] : jumps.regimes[0];
    out.left_limits.push_back(
        kit.h_inv(j_prev, s.times[idx], s.left_limits[e2], out.values[idx]));
  }
  return out;
}

double sup_abs_diff(const SolutionPath& a, const SolutionPath& b) {
  if (a.times.size() != b.times.size())
    throw ConfigError("sup_abs_diff: paths sampled on different grids");
  double worst = 0.0;
  for (size_t k = 0; k < a.values.size(); ++k)
    worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
  const size_t ne = std::min(a.left_limits.size(), b.left_limits.size());
  for (size_t e = 0; e < ne; ++e)
    worst = std::max(worst, std::abs(a.left_limits[e] - b.left_limits[e]));
  return worst;
}

}  // namespace rswz
