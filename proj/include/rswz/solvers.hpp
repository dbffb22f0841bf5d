#pragma once

#include <functional>
#include <vector>

#include "rswz/drivers.hpp"
#include "rswz/jumps.hpp"
#include "rswz/lamperti.hpp"
#include "rswz/model.hpp"

namespace rswz {

// A driving path sampled on a concrete time grid. Both Brownian paths and
// piecewise-linear drivers reduce to this for the pathwise constructions.
struct PathView {
  std::vector<double> times;
  std::vector<double> values;
  bool finite_variation = false;
};

PathView make_view(const BrownianPath& b);
PathView make_view(const DriverPath& f, const std::vector<double>& sample_times);

struct SolutionPath {
  enum Label { X, X_lambda, S, S_lambda };
  Label label = X;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<Regime> regime;        // cadlag regime at each grid time
  std::vector<size_t> epoch_index;   // positions of the jump epochs t_n, n >= 1
  std::vector<double> left_limits;   // left limit at each epoch (paired with epoch_index)
};

// Euler-Maruyama for dX = mu_J dt + sigma_J dB on b's grid (must contain all
// jump epochs). Continuous at epochs.
SolutionPath euler_maruyama_rs(const CoefficientSet& model, const JumpPath& jumps,
                               const BrownianPath& b);

// RK4 for the random ODE dX = (mu_J - 1/2 sigma_J d2sigma_J) dt + sigma_J dF.
// corrected=false drops the -1/2 sigma d2sigma term (for comparison studies).
SolutionPath wz_ode_solve(const CoefficientSet& model, const JumpPath& jumps, const DriverPath& f,
                          double step, bool corrected = true);

// One inter-jump flow: Y(0) = b_start, dY/du = drift(r+u, Y + w(r+u) - w(r)).
// Integrates across the nodes of w inside [r, r+dur] and returns Y at those
// nodes. drift(t, ell, hint) mirrors LampertiKit::mu_star's hint threading.
using DriftFn = std::function<double(double t, double ell, double* x_hint_io)>;
std::vector<double> lamperti_flow(const DriftFn& drift, double b_start, double r, double dur,
                                  const PathView& w);

// Convenience overload using mu_star of the given regime.
std::vector<double> lamperti_flow(const LampertiKit& kit, Regime i, double b_start, double r,
                                  double dur, const PathView& w);

// Pathwise transformed solution: concatenates lamperti_flow segments plus path
// increments between epochs, applying the jump reset at every epoch. Produces
// S when w is a Brownian view and S_lambda when w is a driver view.
SolutionPath build_S(const LampertiKit& kit, const JumpPath& jumps, const PathView& w);

// Pointwise x = h_inv(J_t, t, s_t); maps S to X and S_lambda to X_lambda.
SolutionPath inverse_transform(const LampertiKit& kit, const JumpPath& jumps,
                               const SolutionPath& s);

// Max |a - b| over the shared grid, including left limits at epochs.
double sup_abs_diff(const SolutionPath& a, const SolutionPath& b);

}  // namespace rswz
