// End-to-end acceptance checks. Each check prints one [PASS]/[FAIL] line with
// its elapsed time and budget; the process exit code is the number of failed
// checks. All randomness is seeded, so reruns are bit-identical.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "rswz/analysis.hpp"
#include "rswz/drivers.hpp"
#include "rswz/errors.hpp"
#include "rswz/jumps.hpp"
#include "rswz/lamperti.hpp"
#include "rswz/model.hpp"
#include "rswz/rng.hpp"
#include "rswz/solvers.hpp"
#include "rswz/specfun.hpp"
#include "rswz/version.hpp"

namespace fs = std::filesystem;
using namespace rswz;

namespace {

std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

int g_failures = 0;
double g_rate_sweep_elapsed = 600.0;  // budget for the determinism rerun

void run_check(int idx, const char* name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.pass = false;
    out.detail = fmt("exception: %s", e.what());
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  bool pass = out.pass;
  std::string detail = out.detail;
  if (pass && elapsed > budget_s) {
    pass = false;
    detail += fmt(" [over budget: %.1fs > %.0fs]", elapsed, budget_s);
  }
  if (!pass) ++g_failures;
  std::printf("%s %02d %-28s %7.2fs /%4.0fs  %s\n", pass ? "[PASS]" : "[FAIL]", idx, name, elapsed,
              budget_s, detail.c_str());
  std::fflush(stdout);
}

// ---------------------------------------------------------------------------

Outcome check_lamperti_round_trip() {
  const std::vector<std::pair<std::string, CoefficientSet>> presets = {
      {"constant", preset_constant({0.3, -0.2}, {1.5, 0.8})},
      {"sin", preset_sin()},
      {"time_arctan", preset_time_arctan()}};
  double worst = 0.0;
  for (const auto& [tag, m] : presets) {
    LampertiKit kit{&m, 1e-10, 1e-12};
    Rng rng(101);
    for (int k = 0; k < 1000; ++k) {
      const Regime i = k % m.n_regimes();
      const double t = rng.uniform();
      const double x = -5.0 + 10.0 * rng.uniform();
      const double back = kit.h_inv(i, t, kit.h(i, t, x));
      worst = std::max(worst, std::abs(back - x));
      if (worst > 1e-8)
        return {false, fmt("%s preset: |x' - x| = %.3g > 1e-8 at t=%.4f x=%.4f", tag.c_str(),
                           worst, t, x)};
    }
  }
  return {true, fmt("3 presets x 1000 points, worst |x' - x| = %.2e <= 1e-8", worst)};
}

Outcome check_constant_drift_reduction() {
  const std::vector<double> mu = {0.7, -0.3};
  const std::vector<double> sigma = {2.0, 0.5};
  const CoefficientSet m = preset_constant(mu, sigma);
  LampertiKit kit{&m, 1e-10, 1e-12};
  Rng rng(102);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double t = rng.uniform();
    const double ell = -5.0 + 10.0 * rng.uniform();
    for (Regime i = 0; i < m.n_regimes(); ++i) {
      const double dev = std::abs(kit.mu_star(i, t, ell) - mu[i] / sigma[i]);
      worst = std::max(worst, dev);
    }
  }
  if (worst > 1e-12) return {false, fmt("worst |mu* - mu/sigma| = %.3g > 1e-12", worst)};
  return {true, fmt("100 points x 2 regimes, worst |mu* - mu/sigma| = %.2e <= 1e-12", worst)};
}

Outcome check_ito_residual() {
  ItoFamily fam;
  fam.f = [](Regime i, double t, double x) { return x * x + i * t; };
  fam.d1 = [](Regime i, double, double) { return static_cast<double>(i); };
  fam.d2 = [](Regime, double, double x) { return 2.0 * x; };
  fam.d22 = [](Regime, double, double) { return 2.0; };
  const JumpPath J =
      sample_jump_path(DeterministicSchedule{{0.0, 0.375, 0.75}, {0, 1, 0}}, 0, 1.0, 0);
  if (count_jumps(J, 1.0) < 2) return {false, "schedule lost its jumps"};
  const BrownianPath B = sample_brownian(1.0, 1.0 / 131072.0, 6);
  const DriverPath F = polygonal_approx(B, 2.0);
  const PathView fine = make_view(F, B.grid);
  PathView coarse;
  coarse.finite_variation = true;
  for (std::size_t k = 0; k < fine.times.size(); k += 2) {
    coarse.times.push_back(fine.times[k]);
    coarse.values.push_back(fine.values[k]);
  }
  const double r_coarse = verify_ito_rs(fam, coarse, J);
  const double r_fine = verify_ito_rs(fam, fine, J);
  const double ratio = r_coarse / r_fine;
  const bool ok = r_coarse <= 1e-5 && ratio >= 1.7 && ratio <= 2.3;
  return {ok, fmt("residual %.3e (tol 1e-5), halving ratio %.4f (want [1.7, 2.3]), %d jumps",
                  r_coarse, ratio, count_jumps(J, 1.0))};
}

struct BoundSweep {
  bool ran = false;
  int n_seeds = 0;
  int fail_s = 0, fail_x = 0;
  double worst_s = 0.0, worst_x = 0.0;  // max lhs/rhs over seeds
  BoundConstants c;
};
BoundSweep g_sweep;

Outcome check_pathwise_s_bound() {
  const double lam = 256.0, step = 1.0 / 16384.0, T = 1.0;
  const CoefficientSet m = preset_mmbm();
  double mbar = 0.0;
  for (Regime i = 0; i < m.n_regimes(); ++i)
    mbar = std::max(mbar, estimate_mstar(m, i, Grid2d{}));
  const BoundConstants c = bound_constants_from(mbar, m.v, m.V);
  const HomogeneousMarkov gen{{{-2.0, 2.0}, {3.0, -3.0}}};
  LampertiKit kit{&m, 1e-10, 1e-12};
  g_sweep = BoundSweep{};
  g_sweep.c = c;
  g_sweep.n_seeds = 100;
  for (int sidx = 0; sidx < g_sweep.n_seeds; ++sidx) {
    const std::uint64_t seed = derive_seed(4242, 0, sidx);
    const JumpPath J = sample_jump_path(gen, 0, T, derive_seed(seed, 11, 0));
    std::vector<double> forced = J.epochs;
    for (int k = 1; k < static_cast<int>(lam); ++k) forced.push_back(k / lam);
    const BrownianPath B = sample_brownian(T, step, derive_seed(seed, 13, 0), forced);
    const DriverPath F = polygonal_approx(B, lam);
    const SolutionPath S = build_S(kit, J, make_view(B));
    const SolutionPath Sl = build_S(kit, J, make_view(F, B.grid));
    const BoundReport r =
        check_pathwise_bound(S, Sl, F, B, count_jumps(J, T), c, 1e-3, 1e-6);
    const SolutionPath X = inverse_transform(kit, J, S);
    const SolutionPath Xl = inverse_transform(kit, J, Sl);
    const XBoundReport xr = check_x_bound(X, Xl, S, Sl, m.V, 1e-6);
    if (!r.pass) ++g_sweep.fail_s;
    if (!xr.pass) ++g_sweep.fail_x;
    g_sweep.worst_s = std::max(g_sweep.worst_s, r.margin);
    g_sweep.worst_x = std::max(g_sweep.worst_x, xr.margin);
  }
  g_sweep.ran = true;
  const bool ok = g_sweep.fail_s == 0;
  return {ok, fmt("Mbar=%.3g K1=%.4g K2=%.4g K3=%.4g; %d/%d seeds within bound, worst lhs/rhs %.3f",
                  c.Mbar, c.K1, c.K2, c.K3, g_sweep.n_seeds - g_sweep.fail_s, g_sweep.n_seeds,
                  g_sweep.worst_s)};
}

Outcome check_x_transfer_bound() {
  if (!g_sweep.ran) return {false, "shared sweep did not run"};
  const bool ok = g_sweep.fail_x == 0;
  return {ok, fmt("same sweep: %d/%d seeds with sup|X'-X| <= V sup|S'-S|, worst lhs/rhs %.3f",
                  g_sweep.n_seeds - g_sweep.fail_x, g_sweep.n_seeds, g_sweep.worst_x)};
}

Outcome check_route_consistency() {
  const double lam = 256.0, step = 1.0 / 16384.0, T = 1.0;
  const HomogeneousMarkov gen{{{-2.0, 2.0}, {3.0, -3.0}}};
  const std::vector<std::pair<std::string, CoefficientSet>> presets = {
      {"mmbm", preset_mmbm()}, {"sin", preset_sin()}};
  double worst = 0.0;
  for (const auto& [tag, m] : presets) {
    LampertiKit kit{&m, 1e-10, 1e-12};
    for (int sidx = 0; sidx < 20; ++sidx) {
      const std::uint64_t seed = derive_seed(606, 0, sidx);
      const JumpPath J = sample_jump_path(gen, 0, T, derive_seed(seed, 11, 0));
      std::vector<double> forced = J.epochs;
      for (int k = 1; k < static_cast<int>(lam); ++k) forced.push_back(k / lam);
      const BrownianPath B = sample_brownian(T, step, derive_seed(seed, 13, 0), forced);
      const DriverPath F = polygonal_approx(B, lam);
      const SolutionPath via_s = inverse_transform(kit, J, build_S(kit, J, make_view(F, B.grid)));
      const SolutionPath direct = wz_ode_solve(m, J, F, step, true);
      if (via_s.times != direct.times)
        return {false, fmt("%s seed %d: the two routes landed on different grids", tag.c_str(), sidx)};
      for (std::size_t i = 0; i < via_s.values.size(); ++i)
        worst = std::max(worst, std::abs(via_s.values[i] - direct.values[i]));
      if (worst > 1e-4)
        return {false, fmt("%s seed %d: route discrepancy %.3g > 1e-4", tag.c_str(), sidx, worst)};
    }
  }
  return {true, fmt("2 presets x 20 seeds, worst route discrepancy %.2e <= 1e-4", worst)};
}

Outcome check_strong_rate() {
  const CoefficientSet m = preset_mmbm();
  const HomogeneousMarkov gen{{{-2.0, 2.0}, {3.0, -3.0}}};
  RateRunConfig rc;
  rc.lambda_grid = {16, 32, 64, 128, 256, 512, 1024};
  rc.n_paths = 200;
  rc.master_seed = 5;
  rc.workers = 2;
  const RateEstimate est = estimate_rate(m, gen, 0, rc);
  const double ratio = est.median_x_err.front() / est.median_x_err.back();
  const bool slope_ok = est.slope >= -0.65 && est.slope <= -0.35;
  const bool ratio_ok = ratio >= 8.0;
  return {slope_ok && ratio_ok,
          fmt("slope %.4f (want [-0.65, -0.35]: %s); median err ratio 16->1024 = %.2f (want >= 8: %s)",
              est.slope, slope_ok ? "ok" : "FAIL", ratio, ratio_ok ? "ok" : "FAIL")};
}

Outcome check_correction_necessity() {
  const double lam = 1024.0, step = 1.0 / 8192.0, T = 1.0;
  const CoefficientSet m = preset_sin(1.3, 0.5, -0.4);
  const JumpPath J = sample_jump_path(DeterministicSchedule{{0.0}, {0}}, 0, T, 0);
  std::vector<double> dc, du;
  for (int p = 0; p < 500; ++p) {
    std::vector<double> forced;
    for (int k = 1; k < static_cast<int>(lam); ++k) forced.push_back(k / lam);
    const BrownianPath B = sample_brownian(T, step, derive_seed(2025, 8, p), forced);
    const DriverPath F = polygonal_approx(B, lam);
    const SolutionPath ref = euler_maruyama_rs(m, J, B);
    dc.push_back(sup_abs_diff(ref, wz_ode_solve(m, J, F, step, true)));
    du.push_back(sup_abs_diff(ref, wz_ode_solve(m, J, F, step, false)));
  }
  const double med_c = median_of(dc), med_u = median_of(du);
  const double ratio = med_u / med_c;
  return {ratio >= 5.0, fmt("500 paths: median sup dist corrected %.4g, uncorrected %.4g, ratio %.2f (want >= 5)",
                            med_c, med_u, ratio)};
}

Outcome check_lambert_inverses() {
  double worst_w = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double x = 1e-8 * std::pow(1e20, k / 999.0);
    const WResult w = lambert_w0(x);
    const double res = std::abs(w.value * std::exp(w.value) - x);
    worst_w = std::max(worst_w, res / std::max(1.0, x));
    if (res > 1e-12 * std::max(1.0, x))
      return {false, fmt("lambert residual %.3g at x=%.3g", res, x)};
  }
  double worst_f = 0.0;
  for (double gamma : {0.0, 0.3, 1.0})
    for (double q : {1.0, 2.0})
      for (int k = 0; k < 50; ++k) {
        const double y = std::pow(10.0, 8.0 * k / 49.0);
        const double x = f_inverse(gamma, q, y);
        const double rel = std::abs(f_gamma_q(gamma, q, x) - y) / y;
        worst_f = std::max(worst_f, rel);
        if (rel > 1e-10)
          return {false, fmt("f round trip rel err %.3g at gamma=%.1f q=%.0f y=%.3g", rel, gamma, q, y)};
      }
  double worst_a = 0.0;
  for (double gamma0 : {1.0, std::log(2.0) + 1.0})
    for (double q : {1.0, 2.0})
      for (double lamv : {2.0, 10.0, 1e3, 1e6}) {
        const double a = a_lambda(gamma0, q, lamv);
        const double rel = std::abs(f_gamma_q(gamma0, q, a) - lamv) / lamv;
        worst_a = std::max(worst_a, rel);
        if (rel > 1e-8)
          return {false, fmt("A_lambda rel err %.3g at gamma0=%.3f q=%.0f lambda=%.0f", rel, gamma0, q, lamv)};
      }
  return {true, fmt("worst rel residuals: W %.1e, f round trip %.1e, A_lambda %.1e", worst_w,
                    worst_f, worst_a)};
}

Outcome check_jump_domination() {
  const HomogeneousMarkov gen{{{-3.0, 3.0}, {2.0, -2.0}}};
  const double c = 3.0;
  const int n_paths = 20000;
  std::vector<int> counts(n_paths);
  for (int p = 0; p < n_paths; ++p)
    counts[p] = count_jumps(sample_jump_path(gen, 0, 1.0, derive_seed(777, 10, p)), 1.0);
  double worst_gap = -1e300;
  for (int n = 0; n <= 15; ++n) {
    int exceed = 0;
    for (int v : counts) exceed += v > n ? 1 : 0;
    const double emp = static_cast<double>(exceed) / n_paths;
    const double tail = poisson_tail_bound(n + 1, c).exact_tail;
    const double se = std::sqrt(tail * (1.0 - tail) / n_paths);
    worst_gap = std::max(worst_gap, emp - (tail + 3.0 * se));
    if (emp > tail + 3.0 * se)
      return {false, fmt("n=%d: empirical P(N>n)=%.4g exceeds Poisson tail %.4g + 3SE", n, emp, tail)};
  }
  for (double cc : {0.5, 1.0, 2.0, 5.0})
    for (int n = 10; n <= 40; ++n) {
      const PoissonTail pt = poisson_tail_bound(n, cc);
      if (pt.stirling_bound < pt.exact_tail)
        return {false, fmt("stirling bound %.4g below exact tail %.4g at n=%d c=%.1f",
                           pt.stirling_bound, pt.exact_tail, n, cc)};
    }
  return {true, fmt("%d paths, P(N>n) within Poisson(%.0f)+3SE for n<=15 (worst gap %.1e); "
                    "stirling >= exact on n in [10,40]",
                    n_paths, c, worst_gap)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome check_cli_determinism() {
#ifndef RSWZ_CLI_PATH
  return {false, "cli path not compiled in"};
#else
  const fs::path dir = fs::temp_directory_path() / "rswz_accept_determinism";
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json";
  {
    std::ofstream out(cfg);
    out << R"({
  "model": {"preset": "mmbm"},
  "jumps": {"kind": "homogeneous", "Q": [[-2.0, 2.0], [3.0, -3.0]], "j0": 0},
  "driver": {"kind": "polygonal"},
  "seeds": {"master": 99},
  "rate": {"lambda_grid": [16.0, 32.0, 64.0, 128.0], "n_paths": 50}
})";
  }
  const std::string runs[3][2] = {{"r1", "1"}, {"r1b", "1"}, {"r4", "4"}};
  for (const auto& r : runs) {
    const std::string cmd = std::string(RSWZ_CLI_PATH) + " converge --config " + cfg.string() +
                            " --workers " + r[1] + " --out " + (dir / r[0]).string() +
                            " > /dev/null 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, fmt("converge run '%s' failed", r[0].c_str())};
  }
  for (const char* f : {"rate.csv", "summary.json"}) {
    const std::string a = slurp(dir / "r1" / f);
    const std::string b = slurp(dir / "r1b" / f);
    const std::string d = slurp(dir / "r4" / f);
    if (a.empty()) return {false, fmt("%s is empty", f)};
    if (a != b) return {false, fmt("%s differs between identical reruns", f)};
    if (a != d) return {false, fmt("%s differs between workers 1 and 4", f)};
  }
  return {true, "rate.csv and summary.json byte-identical across reruns and workers {1,4}"};
#endif
}

}  // namespace

int main() {
  std::printf("acceptance suite, toolkit version %s\n", kVersion);
  run_check(1, "lamperti-round-trip", 5, check_lamperti_round_trip);
  run_check(2, "constant-drift-reduction", 1, check_constant_drift_reduction);
  run_check(3, "ito-rs-residual", 10, check_ito_residual);
  run_check(4, "pathwise-s-bound", 120, check_pathwise_s_bound);
  run_check(5, "x-transfer-bound", 120, check_x_transfer_bound);
  run_check(6, "route-consistency", 60, check_route_consistency);
  {
    const auto t0 = std::chrono::steady_clock::now();
    run_check(7, "strong-rate-sweep", 600, check_strong_rate);
    g_rate_sweep_elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  run_check(8, "correction-necessity", 600, check_correction_necessity);
  run_check(9, "lambert-w-inverses", 1, check_lambert_inverses);
  run_check(10, "jump-count-domination", 60, check_jump_domination);
  run_check(11, "cli-determinism", std::max(g_rate_sweep_elapsed, 5.0), check_cli_determinism);
  std::printf("%d of 11 checks passed\n", 11 - g_failures);
  return g_failures;
}
