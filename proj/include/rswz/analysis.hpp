#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "rswz/drivers.hpp"
#include "rswz/jumps.hpp"
#include "rswz/model.hpp"
#include "rswz/solvers.hpp"

namespace rswz {

struct BoundConstants {
  double Mbar = 0.0;
  double K1 = 0.0, K2 = 0.0, K3 = 0.0;
  double v = 0.0, V = 0.0;
};

// K1 = max(2 Mbar, 1) exp(Mbar), K3 = K1 V / v, K2 = K3 (2 + K1) / (K3 - 1).
// Throws ConfigError when K3 <= 1 (K2 undefined).
BoundConstants bound_constants_from(double Mbar, double v, double V);
BoundConstants bound_constants(const CoefficientSet& model);  // Mbar = max declared mstar

struct BoundReport {
  double lhs = 0.0, rhs = 0.0, sup_fb = 0.0;
  int n_jumps = 0;
  double margin = 0.0;  // lhs / rhs
  bool pass = false;
  bool gronwall_checked = false;
  bool gronwall_pass = true;
  double gronwall_worst = 0.0;  // worst segment ratio lhs/rhs
};

// sup|S_lambda - S| <= K2 K3^N sup|F - B| (1 + slack_rel) + slack_abs, with an
// optional per-segment Gronwall check in detailed mode.
BoundReport check_pathwise_bound(const SolutionPath& s, const SolutionPath& s_lambda,
                                 const DriverPath& f, const BrownianPath& b, int n_jumps,
                                 const BoundConstants& c, double slack_rel, double slack_abs,
                                 bool detailed = false);

struct XBoundReport {
  double lhs = 0.0, rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

// sup|X_lambda - X| <= V sup|S_lambda - S| (1 + slack_rel).
XBoundReport check_x_bound(const SolutionPath& x, const SolutionPath& x_lambda,
                           const SolutionPath& s, const SolutionPath& s_lambda, double V,
                           double slack_rel);

// Per-regime test function family with the partials needed by the formula.
struct ItoFamily {
  std::function<double(Regime, double, double)> f;
  std::function<double(Regime, double, double)> d1;
  std::function<double(Regime, double, double)> d2;
  std::function<double(Regime, double, double)> d22;
};

// Max absolute residual of the regime-switching change-of-variables formula
// along z's grid. Left-point sums for the dz and dt integrals; the quadratic
// term enters only for Brownian input. Jump epochs must lie on z's grid.
double verify_ito_rs(const ItoFamily& fam, const PathView& z, const JumpPath& jumps);

struct StepRule {
  double mesh_divisor = 8.0;  // step = (1/lambda) / mesh_divisor
  double fixed_step = 0.0;    // used instead when positive
  double step_for(double lambda) const;
};

struct RateEstimate {
  std::vector<double> lambda_grid;
  std::vector<std::vector<double>> x_errs;    // [lambda][path]
  std::vector<std::vector<double>> s_errs;
  std::vector<std::vector<double>> fb_dists;
  std::vector<std::vector<int>> jump_counts;
  std::vector<double> median_x_err;
  std::vector<double> median_s_err;
  double slope = 0.0, intercept = 0.0;
  std::vector<double> tail_prob;  // P(x_err >= gamma delta(lambda) lambda^eps)
};

struct RateRunConfig {
  std::string driver_kind = "polygonal";
  std::vector<double> lambda_grid;
  int n_paths = 200;
  StepRule step_rule;
  double T = 1.0;
  double gamma = 1.0, epsilon = 0.05, q = 2.0;
  std::uint64_t master_seed = 1;
  int workers = 1;
  double budget_max_steps = 4e9;
  RateFunction delta = polygonal_rate();
  double quad_tol = 1e-10, root_tol = 1e-12;
  // Test hook: when set, replaces the simulated sup errors by
  // synthetic(lambda, path_index) and skips all path construction.
  std::function<double(double, std::uint64_t)> synthetic;
};

// Monte Carlo sweep over (lambda, path) cells; deterministic for a fixed
// master seed regardless of worker count.
RateEstimate estimate_rate(const CoefficientSet& model, const JumpGenerator& gen, Regime j0,
                           const RateRunConfig& rc);

// A_lambda = f_{gamma0,q}^{-1}(lambda), lambda >= 1.
double a_lambda(double gamma0, double q, double lam);

double median_of(std::vector<double> v);
void fit_loglog(const std::vector<double>& lam, const std::vector<double>& med, double& slope,
                double& intercept);

}  // namespace rswz
