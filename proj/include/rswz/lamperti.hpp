#pragma once

#include "rswz/model.hpp"

namespace rswz {

// State transform h_i(t,x) = int_{x0}^{x} dy / sigma_i(t,y) and friends.
// Pure functions of the immutable model; safe to share across threads.
struct LampertiKit {
  const CoefficientSet* model = nullptr;
  double quad_tol = 1e-10;
  double root_tol = 1e-12;

  double h(Regime i, double t, double x) const;

  // Inverse in the second argument. The no-hint overload brackets via the
  // diffusion bounds and bisects before polishing with Newton; the hint
  // overload starts safeguarded Newton from a caller-supplied estimate
  // (e.g. the previous point of a trajectory).
  double h_inv(Regime i, double t, double ell) const;
  double h_inv(Regime i, double t, double ell, double hint) const;

  // Signed time partial of h obtained by differentiating under the integral:
  // d1_h = -int_{x0}^{x} d1_sigma / sigma^2 dy.
  double d1_h(Regime i, double t, double x) const;

  // Transformed drift. The optional in/out hint carries the untransformed
  // state between consecutive calls along a trajectory.
  double mu_star(Regime i, double t, double ell) const;
  double mu_star(Regime i, double t, double ell, double* x_hint_io) const;

  // Value pasted onto the transformed path at a regime change.
  double jump_reset(Regime i_prev, Regime i_new, double t, double s_minus) const;
};

}  // namespace rswz
