#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rswz {

// Regime index into the finite state space {0, ..., n_regimes-1}.
using Regime = int;

using Coefficient = std::function<double(double, double)>;  // (t, x) -> value

struct RegimeCoefficients {
  Coefficient mu;
  Coefficient sigma;
  Coefficient d1_sigma;  // time partial of sigma
  Coefficient d2_sigma;  // state partial of sigma
};

// Immutable after construction; coefficient functions must be pure so the
// set can be shared across concurrent workers.
struct CoefficientSet {
  std::vector<RegimeCoefficients> regimes;
  double v = 0.0;              // lower diffusion bound, 0 < v <= sigma
  double V = 0.0;              // upper diffusion bound, sigma <= V
  double K = 0.0;              // bound on |d1_sigma| / sigma^2
  std::vector<double> mstar;   // per-regime Lipschitz constant of the transformed drift
  double x0 = 0.0;

  int n_regimes() const { return static_cast<int>(regimes.size()); }
};

struct Grid2d {
  double t_lo = 0.0, t_hi = 1.0;
  int nt = 21;
  double x_lo = -5.0, x_hi = 5.0;
  int nx = 41;
};

struct Violation {
  std::string what;
  Regime regime = 0;
  double t = 0.0, x = 0.0;
  double observed = 0.0, declared = 0.0;
};

struct ValidationReport {
  bool sigma_bounds_ok = true;   // v < sigma < V on the grid
  bool k_bound_ok = true;        // |d1_sigma|/sigma^2 <= K on the grid
  bool d1_consistent_ok = true;  // finite differences match d1_sigma
  bool d2_consistent_ok = true;  // finite differences match d2_sigma
  double sigma_min = 0.0, sigma_max = 0.0;
  double max_k_ratio = 0.0;
  double max_d1_err = 0.0, max_d2_err = 0.0;
  std::vector<Violation> violations;
  std::string grid_desc;

  bool pass() const { return sigma_bounds_ok && k_bound_ok && d1_consistent_ok && d2_consistent_ok; }
};

// Samples every regime's coefficients on the grid and checks the declared
// bounds plus finite-difference consistency of the supplied derivatives.
ValidationReport validate_assumptions(const CoefficientSet& model, const Grid2d& grid);

// Max divided difference of the transformed drift over adjacent second-argument
// grid points; a lower estimate of the true Lipschitz constant.
double estimate_mstar(const CoefficientSet& model, Regime i, const Grid2d& grid);

// Named presets. Bounds are pre-declared to match the coefficient families.
CoefficientSet preset_constant(const std::vector<double>& mu, const std::vector<double>& sigma,
                               double x0 = 0.0);
CoefficientSet preset_mmbm();  // mu = (1,-1), sigma = (1,2), v=0.9, V=2.1
CoefficientSet preset_sin(double amp0 = 1.0, double amp1 = 0.5, double x0 = 0.0);
CoefficientSet preset_time_arctan();

}  // namespace rswz
