#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <utility>

#include "rswz/errors.hpp"

namespace rswz {

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  long evals = 0;
};

namespace detail {

// 12-point Gauss-Legendre nodes/weights on [-1,1], computed once by Newton
// iteration on the Legendre recurrence (no hard-coded decimal tables).
struct Gauss12 {
  std::array<double, 12> x{};
  std::array<double, 12> w{};
  Gauss12() {
    const int n = 12;
    for (int k = 0; k < n; ++k) {
      double xi = std::cos(M_PI * (k + 0.75) / (n + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = xi;
        for (int j = 2; j <= n; ++j) {
          double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
          p0 = p1;
          p1 = p2;
        }
        double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
        double dx = p1 / dp;
        xi -= dx;
        if (std::abs(dx) < 1e-16) break;
      }
      double p0 = 1.0, p1 = xi;
      for (int j = 2; j <= n; ++j) {
        double p2 = ((2.0 * j - 1.0) * xi * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      double dp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      x[k] = xi;
      w[k] = 2.0 / ((1.0 - xi * xi) * dp * dp);
    }
  }
};

inline const Gauss12& gauss12() {
  static const Gauss12 g;
  return g;
}

template <class F>
double gl12(F& f, double a, double b, long& evals) {
  const Gauss12& g = gauss12();
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (int k = 0; k < 12; ++k) s += g.w[k] * f(c + h * g.x[k]);
  evals += 12;
  return s * h;
}

template <class F>
double adapt(F& f, double a, double b, double tol, double whole, int depth, long& evals,
             double& worst) {
  const double c = 0.5 * (a + b);
  const double left = gl12(f, a, c, evals);
  const double right = gl12(f, c, b, evals);
  const double diff = std::abs(whole - (left + right));
  if (diff <= tol || depth >= 48) {
    if (diff > worst) worst = diff;
    if (depth >= 48 && diff > tol) {
      char msg[160];
      std::snprintf(msg, sizeof(msg),
                    "quadrature did not converge on [%.17g, %.17g]: achieved %.3e, wanted %.3e",
                    a, b, diff, tol);
      throw NumericError(msg);
    }
    return left + right;
  }
  return adapt(f, a, c, 0.5 * tol, left, depth + 1, evals, worst) +
         adapt(f, c, b, 0.5 * tol, right, depth + 1, evals, worst);
}

}  // namespace detail

// Adaptive Gauss quadrature of f over [a, b] (a > b allowed, sign handled) to
// absolute tolerance abs_tol.
template <class F>
QuadResult integrate(F&& f, double a, double b, double abs_tol) {
  QuadResult r;
  if (a == b) return r;
  double sign = 1.0;
  if (a > b) {
    std::swap(a, b);
    sign = -1.0;
  }
  double worst = 0.0;
  const double whole = detail::gl12(f, a, b, r.evals);
  r.value = sign * detail::adapt(f, a, b, abs_tol, whole, 0, r.evals, worst);
  r.err_estimate = worst;
  return r;
}

}  // namespace rswz
