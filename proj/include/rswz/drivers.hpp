#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace rswz {

// Grid-sampled Brownian path; increments over grid cells are independent
// N(0, dt) draws. Linear interpolation between grid points.
struct BrownianPath {
  double T = 0.0;
  double step = 0.0;  // nominal uniform spacing (forced times are inserted)
  std::vector<double> grid;
  std::vector<double> values;

  double value_at(double t) const;
};

// Piecewise-linear finite-variation driver.
struct DriverPath {
  enum Kind { polygonal, transport };
  Kind kind = polygonal;
  double lambda = 0.0;
  bool coupled = false;  // true when built from a specific Brownian path
  double T = 0.0;
  std::vector<double> breakpoints;
  std::vector<double> values;

  double value_at(double t) const;
  double total_variation() const;
  // Values at the requested times (exact at breakpoints, linear between).
  std::vector<double> sample(const std::vector<double>& times) const;
};

// delta(lambda) attached to a driver family.
struct RateFunction {
  std::string tag;
  std::function<double(double)> delta;
};

RateFunction polygonal_rate();  // lambda^{-1/2} (1 + log lambda)^{1/2}
RateFunction transport_rate();  // lambda^{-1/4} log lambda

// Union of the uniform grid with the given step and forced_times; increments
// are Gaussian with variance equal to each cell width. Deterministic per seed.
BrownianPath sample_brownian(double T, double step, std::uint64_t seed,
                             const std::vector<double>& forced_times = {});

// Interpolates b at breakpoints k/lambda (snapped to b's grid).
// Requires b.step <= 1/(8 lambda).
DriverPath polygonal_approx(const BrownianPath& b, double lambda);

// Telegraph integral: slopes +-sqrt(lambda), switching at Poisson(lambda)
// epochs, initial slope +1. Uncoupled.
DriverPath transport_process(double lambda, double T, std::uint64_t seed);

// Max |F - B| over the union of both grids.
double sup_distance(const DriverPath& f, const BrownianPath& b);

// Sorted union of several time grids with exact-equality deduplication.
std::vector<double> merge_grids(std::vector<std::vector<double>> grids);

}  // namespace rswz
