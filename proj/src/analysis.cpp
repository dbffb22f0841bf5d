#include "rswz/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "rswz/errors.hpp"
#include "rswz/lamperti.hpp"
#include "rswz/rng.hpp"
#include "rswz/specfun.hpp"

namespace rswz {

BoundConstants bound_constants_from(double Mbar, double v, double V) {
  if (!(Mbar >= 0.0)) throw ConfigError("bound_constants: Mbar must be nonnegative");
  if (!(0.0 < v && v < V)) throw ConfigError("bound_constants: need 0 < v < V");
  BoundConstants c;
  c.Mbar = Mbar;
  c.v = v;
  c.V = V;
  c.K1 = std::max(2.0 * Mbar, 1.0) * std::exp(Mbar);
  c.K3 = c.K1 * V / v;
  if (!(c.K3 > 1.0))
    throw ConfigError("bound_constants: K3 = " + std::to_string(c.K3) +
                      " <= 1, composed bound undefined");
  c.K2 = c.K3 * (2.0 + c.K1) / (c.K3 - 1.0);
  return c;
}

BoundConstants bound_constants(const CoefficientSet& model) {
  double Mbar = 0.0;
  for (double m : model.mstar) Mbar = std::max(Mbar, m);
  return bound_constants_from(Mbar, model.v, model.V);
}

namespace {

// Reconstructs the frozen-path segments Y from a stored solution and its
// driving path, and checks each against the one-segment Gronwall bound.
void gronwall_segments(const SolutionPath& s, const SolutionPath& s_lambda,
                       const std::vector<double>& wb, const std::vector<double>& wf,
                       double sup_fb, double K1, BoundReport& rep) {
  std::vector<std::size_t> bounds;
  bounds.push_back(0);
  for (std::size_t e : s.epoch_index) bounds.push_back(e);
  bounds.push_back(s.times.size() - 1);

  rep.gronwall_checked = true;
  for (std::size_t m = 0; m + 1 < bounds.size(); ++m) {
    const std::size_t k0 = bounds[m], k1 = bounds[m + 1];
    if (k1 <= k0) continue;
    const double a = s_lambda.values[k0], b = s.values[k0];
    const double rhs = K1 * (sup_fb + std::abs(a - b));
    double lhs = 0.0;
    for (std::size_t k = k0; k <= k1; ++k) {
      double sv = s.values[k], slv = s_lambda.values[k];
      if (k == k1 && m < s.epoch_index.size()) {
        sv = s.left_limits[m];
        slv = s_lambda.left_limits[m];
      }
      const double y = sv - (wb[k] - wb[k0]);
      const double yl = slv - (wf[k] - wf[k0]);
      lhs = std::max(lhs, std::abs(yl - y));
    }
    const double ratio = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? HUGE_VAL : 0.0);
    rep.gronwall_worst = std::max(rep.gronwall_worst, ratio);
    if (lhs > rhs * (1.0 + 1e-9) + 1e-12) rep.gronwall_pass = false;
  }
}

}  // namespace

BoundReport check_pathwise_bound(const SolutionPath& s, const SolutionPath& s_lambda,
                                 const DriverPath& f, const BrownianPath& b, int n_jumps,
                                 const BoundConstants& c, double slack_rel, double slack_abs,
                                 bool detailed) {
  if (n_jumps < 0) throw ConfigError("check_pathwise_bound: negative jump count");
  if (s.epoch_index.size() != s_lambda.epoch_index.size())
    throw ConfigError("check_pathwise_bound: paths disagree on jump structure");
  BoundReport rep;
  rep.n_jumps = n_jumps;
  rep.lhs = sup_abs_diff(s, s_lambda);
  rep.sup_fb = sup_distance(f, b);
  rep.rhs = c.K2 * std::pow(c.K3, n_jumps) * rep.sup_fb * (1.0 + slack_rel) + slack_abs;
  rep.margin = rep.rhs > 0.0 ? rep.lhs / rep.rhs : HUGE_VAL;
  rep.pass = rep.lhs <= rep.rhs;
  if (detailed) {
    std::vector<double> wb(s.times.size()), wf(s.times.size());
    for (std::size_t k = 0; k < s.times.size(); ++k) {
      wb[k] = b.value_at(s.times[k]);
      wf[k] = f.value_at(s.times[k]);
    }
    gronwall_segments(s, s_lambda, wb, wf, rep.sup_fb, c.K1, rep);
  }
  return rep;
}

XBoundReport check_x_bound(const SolutionPath& x, const SolutionPath& x_lambda,
                           const SolutionPath& s, const SolutionPath& s_lambda, double V,
                           double slack_rel) {
  if (!(V > 0.0)) throw ConfigError("check_x_bound: V must be positive");
  XBoundReport rep;
  rep.lhs = sup_abs_diff(x, x_lambda);
  rep.rhs = V * sup_abs_diff(s, s_lambda) * (1.0 + slack_rel);
  rep.margin = rep.rhs > 0.0 ? rep.lhs / rep.rhs : (rep.lhs > 0.0 ? HUGE_VAL : 0.0);
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

double verify_ito_rs(const ItoFamily& fam, const PathView& z, const JumpPath& jumps) {
  if (!fam.f || !fam.d1 || !fam.d2 || !fam.d22)
    throw ConfigError("verify_ito_rs: family must provide f, d1, d2, d22");
  if (z.times.size() < 2) throw ConfigError("verify_ito_rs: path needs at least two points");
  for (std::size_t k = 1; k < jumps.epochs.size(); ++k) {
    const double te = jumps.epochs[k];
    if (te > z.times.back() + 1e-12) break;
    auto it = std::lower_bound(z.times.begin(), z.times.end(), te - 1e-12);
    if (it == z.times.end() || std::abs(*it - te) > 1e-12)
      throw ConfigError("verify_ito_rs: jump epoch " + std::to_string(te) +
                        " does not lie on the path grid");
  }
  Regime i = jumps.regime_at(z.times.front());
  const double f0 = fam.f(i, z.times.front(), z.values.front());
  double acc = 0.0, worst = 0.0;
  for (std::size_t k = 0; k + 1 < z.times.size(); ++k) {
    const double t = z.times[k], tn = z.times[k + 1];
    const double zv = z.values[k], zn = z.values[k + 1];
    const double dt = tn - t, dz = zn - zv;
    acc += fam.d1(i, t, zv) * dt + fam.d2(i, t, zv) * dz;
    if (!z.finite_variation) acc += 0.5 * fam.d22(i, t, zv) * dt;
    const Regime in = jumps.regime_at(tn);
    if (in != i) acc += fam.f(in, tn, zn) - fam.f(i, tn, zn);
    i = in;
    worst = std::max(worst, std::abs(fam.f(i, tn, zn) - f0 - acc));
  }
  return worst;
}

double StepRule::step_for(double lambda) const {
  if (fixed_step > 0.0) return fixed_step;
  if (!(lambda > 0.0) || !(mesh_divisor > 0.0))
    throw ConfigError("step rule needs positive lambda and mesh divisor");
  return 1.0 / (lambda * mesh_divisor);
}

namespace {

struct Cell {
  double x_err = 0.0, s_err = 0.0, fb = 0.0;
  int n_jumps = 0;
};

void run_cell(const CoefficientSet& model, const JumpGenerator& gen, Regime j0,
              const RateRunConfig& rc, std::size_t li, std::size_t pi, Cell& out) {
  const double lam = rc.lambda_grid[li];
  if (rc.synthetic) {
    const double e = rc.synthetic(lam, static_cast<std::uint64_t>(pi));
    out.x_err = e;
    out.s_err = e;
    out.fb = e;
    out.n_jumps = 0;
    return;
  }
  const std::uint64_t cell_seed =
      derive_seed(rc.master_seed, static_cast<std::uint64_t>(li), static_cast<std::uint64_t>(pi));
  const JumpPath J = sample_jump_path(gen, j0, rc.T, derive_seed(cell_seed, 11, 0));
  const double st = rc.step_rule.step_for(lam);

  std::vector<double> forced = J.epochs;
  for (long k = 1; k / lam < rc.T - 1e-12; ++k) forced.push_back(static_cast<double>(k) / lam);
  const BrownianPath B = sample_brownian(rc.T, st, derive_seed(cell_seed, 13, 0), forced);
  const DriverPath F = polygonal_approx(B, lam);

  LampertiKit kit{&model, rc.quad_tol, rc.root_tol};
  const SolutionPath S = build_S(kit, J, make_view(B));
  const SolutionPath Sl = build_S(kit, J, make_view(F, B.grid));
  const SolutionPath X = inverse_transform(kit, J, S);
  const SolutionPath Xl = inverse_transform(kit, J, Sl);

  out.x_err = sup_abs_diff(X, Xl);
  out.s_err = sup_abs_diff(S, Sl);
  out.fb = sup_distance(F, B);
  out.n_jumps = count_jumps(J, rc.T);
}

}  // namespace

RateEstimate estimate_rate(const CoefficientSet& model, const JumpGenerator& gen, Regime j0,
                           const RateRunConfig& rc) {
  if (rc.driver_kind != "polygonal")
    throw ConfigError("estimate_rate: driver '" + rc.driver_kind +
                      "' is uncoupled; rate estimation needs the coupled polygonal driver");
  if (rc.lambda_grid.empty()) throw ConfigError("estimate_rate: empty lambda grid");
  for (double lam : rc.lambda_grid)
    if (!(lam > 0.0)) throw ConfigError("estimate_rate: lambda values must be positive");
  if (rc.n_paths < 1) throw ConfigError("estimate_rate: n_paths must be positive");
  if (!(rc.T > 0.0)) throw ConfigError("estimate_rate: horizon must be positive");

  if (!rc.synthetic) {
    double projected = 0.0;
    for (double lam : rc.lambda_grid)
      projected += static_cast<double>(rc.n_paths) * (rc.T / rc.step_rule.step_for(lam));
    if (projected > rc.budget_max_steps)
      throw BudgetError("estimate_rate: projected " + std::to_string(projected) +
                        " solver steps exceed budget " + std::to_string(rc.budget_max_steps));
  }

  const std::size_t L = rc.lambda_grid.size();
  const std::size_t P = static_cast<std::size_t>(rc.n_paths);
  const std::size_t total = L * P;
  std::vector<Cell> cells(total);
  std::atomic<std::size_t> next{0};
  const int nw = std::max(1, rc.workers);
  std::vector<std::exception_ptr> eptrs(static_cast<std::size_t>(nw));

  auto worker = [&](int wid) {
    try {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= total) return;
        run_cell(model, gen, j0, rc, idx / P, idx % P, cells[idx]);
      }
    } catch (...) {
      eptrs[static_cast<std::size_t>(wid)] = std::current_exception();
      next.store(total);
    }
  };

  if (nw == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nw));
    for (int w = 0; w < nw; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }
  for (auto& ep : eptrs)
    if (ep) std::rethrow_exception(ep);

  RateEstimate est;
  est.lambda_grid = rc.lambda_grid;
  est.x_errs.resize(L);
  est.s_errs.resize(L);
  est.fb_dists.resize(L);
  est.jump_counts.resize(L);
  est.tail_prob.resize(L, 0.0);
  for (std::size_t li = 0; li < L; ++li) {
    est.x_errs[li].reserve(P);
    est.s_errs[li].reserve(P);
    est.fb_dists[li].reserve(P);
    est.jump_counts[li].reserve(P);
    const double lam = rc.lambda_grid[li];
    const double threshold = rc.gamma * rc.delta.delta(lam) * std::pow(lam, rc.epsilon);
    int exceed = 0;
    for (std::size_t pi = 0; pi < P; ++pi) {
      const Cell& cl = cells[li * P + pi];
      est.x_errs[li].push_back(cl.x_err);
      est.s_errs[li].push_back(cl.s_err);
      est.fb_dists[li].push_back(cl.fb);
      est.jump_counts[li].push_back(cl.n_jumps);
      if (cl.x_err >= threshold) ++exceed;
    }
    est.median_x_err.push_back(median_of(est.x_errs[li]));
    est.median_s_err.push_back(median_of(est.s_errs[li]));
    est.tail_prob[li] = static_cast<double>(exceed) / static_cast<double>(P);
  }
  fit_loglog(est.lambda_grid, est.median_x_err, est.slope, est.intercept);
  return est;
}

double a_lambda(double gamma0, double q, double lam) { return f_inverse(gamma0, q, lam); }

double median_of(std::vector<double> v) {
  if (v.empty()) throw ConfigError("median of empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  if (n % 2 == 1) return v[n / 2];
  return 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

void fit_loglog(const std::vector<double>& lam, const std::vector<double>& med, double& slope,
                double& intercept) {
  if (lam.size() != med.size() || lam.size() < 2)
    throw ConfigError("fit_loglog: need at least two points");
  const std::size_t n = lam.size();
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    if (!(lam[k] > 0.0) || !(med[k] > 0.0))
      throw NumericError("fit_loglog: nonpositive value, cannot take logs");
    const double x = std::log(lam[k]), y = std::log(med[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double dn = static_cast<double>(n);
  const double denom = dn * sxx - sx * sx;
  if (std::abs(denom) < 1e-30) throw NumericError("fit_loglog: degenerate abscissae");
  slope = (dn * sxy - sx * sy) / denom;
  intercept = (sy - slope * sx) / dn;
}

}  // namespace rswz
