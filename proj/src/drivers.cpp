#include "rswz/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rswz/errors.hpp"
#include "rswz/rng.hpp"

namespace rswz {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double t) {
  if (t <= xs.front()) return ys.front();
  if (t >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), t);
  const size_t k = static_cast<size_t>(it - xs.begin());
  const double w = (t - xs[k - 1]) / (xs[k] - xs[k - 1]);
  return ys[k - 1] + w * (ys[k] - ys[k - 1]);
}

}  // namespace

double BrownianPath::value_at(double t) const { return interp(grid, values, t); }

double DriverPath::value_at(double t) const { return interp(breakpoints, values, t); }

double DriverPath::total_variation() const {
  double tv = 0.0;
  for (size_t k = 1; k < values.size(); ++k) tv += std::abs(values[k] - values[k - 1]);
  return tv;
}

std::vector<double> DriverPath::sample(const std::vector<double>& times) const {
  std::vector<double> out(times.size());
  for (size_t k = 0; k < times.size(); ++k) out[k] = value_at(times[k]);
  return out;
}

RateFunction polygonal_rate() {
  return {"polygonal", [](double lam) { return std::sqrt((1.0 + std::log(lam)) / lam); }};
}

RateFunction transport_rate() {
  return {"transport", [](double lam) { return std::pow(lam, -0.25) * std::log(lam); }};
}

std::vector<double> merge_grids(std::vector<std::vector<double>> grids) {
  std::vector<double> all;
  for (auto& g : grids) all.insert(all.end(), g.begin(), g.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

BrownianPath sample_brownian(double T, double step, std::uint64_t seed,
                             const std::vector<double>& forced_times) {
  if (!(T > 0.0) || !(step > 0.0) || step > T)
    throw ConfigError("sample_brownian: need 0 < step <= T");
  std::vector<double> uniform;
  const long n = std::lround(T / step);
  uniform.reserve(static_cast<size_t>(n) + 2);
  for (long k = 0; k <= n; ++k) uniform.push_back(static_cast<double>(k) * step);
  if (std::abs(uniform.back() - T) > 1e-12 * std::max(1.0, T)) uniform.push_back(T);
  uniform.back() = std::min(uniform.back(), T);

  std::vector<double> forced;
  for (double t : forced_times) {
    if (t < 0.0 || t > T) throw ConfigError("sample_brownian: forced time outside [0, T]");
    forced.push_back(t);
  }
  BrownianPath b;
  b.T = T;
  b.step = step;
  b.grid = merge_grids({std::move(uniform), std::move(forced)});

  Rng rng(seed);
  b.values.resize(b.grid.size());
  b.values[0] = 0.0;
  for (size_t k = 1; k < b.grid.size(); ++k) {
    const double dt = b.grid[k] - b.grid[k - 1];
    b.values[k] = b.values[k - 1] + std::sqrt(dt) * rng.normal();
  }
  return b;
}

DriverPath polygonal_approx(const BrownianPath& b, double lambda) {
  if (!(lambda > 0.0)) throw ConfigError("polygonal_approx: lambda must be positive");
  if (b.step > 1.0 / (8.0 * lambda)) {
    char msg[128];
    std::snprintf(msg, sizeof(msg),
                  "polygonal_approx: Brownian step %.6g too coarse for lambda = %.6g "
                  "(need step <= 1/(8 lambda))",
                  b.step, lambda);
    throw ConfigError(msg);
  }
  DriverPath f;
  f.kind = DriverPath::polygonal;
  f.lambda = lambda;
  f.coupled = true;
  f.T = b.T;
  const double mesh = 1.0 / lambda;
  const long nseg = static_cast<long>(std::ceil(b.T / mesh - 1e-12));
  size_t prev_idx = static_cast<size_t>(-1);
  for (long k = 0; k <= nseg; ++k) {
    const double target = std::min(static_cast<double>(k) * mesh, b.T);
    // Snap to the nearest Brownian grid point.
    const auto it = std::lower_bound(b.grid.begin(), b.grid.end(), target);
    size_t idx = static_cast<size_t>(it - b.grid.begin());
    if (idx == b.grid.size()) {
      idx = b.grid.size() - 1;
    } else if (idx > 0 && target - b.grid[idx - 1] < b.grid[idx] - target) {
      idx = idx - 1;
    }
    if (idx == prev_idx) continue;
    prev_idx = idx;
    f.breakpoints.push_back(b.grid[idx]);
    f.values.push_back(b.values[idx]);
  }
  return f;
}

DriverPath transport_process(double lambda, double T, std::uint64_t seed) {
  if (!(lambda > 0.0) || !(T > 0.0))
    throw ConfigError("transport_process: lambda and T must be positive");
  DriverPath f;
  f.kind = DriverPath::transport;
  f.lambda = lambda;
  f.coupled = false;
  f.T = T;
  const double speed = std::sqrt(lambda);
  Rng rng(seed);
  double t = 0.0, val = 0.0, sign = 1.0;
  f.breakpoints.push_back(0.0);
  f.values.push_back(0.0);
  for (;;) {
    const double next = t + rng.exponential(lambda);
    if (next >= T) {
      f.breakpoints.push_back(T);
      f.values.push_back(val + sign * speed * (T - t));
      break;
    }
    val += sign * speed * (next - t);
    f.breakpoints.push_back(next);
    f.values.push_back(val);
    sign = -sign;
    t = next;
  }
  return f;
}

double sup_distance(const DriverPath& f, const BrownianPath& b) {
  if (std::abs(f.T - b.T) > 1e-12 * std::max(1.0, b.T))
    throw ConfigError("sup_distance: mismatched horizons");
  double worst = 0.0;
  for (size_t k = 0; k < b.grid.size(); ++k)
    worst = std::max(worst, std::abs(f.value_at(b.grid[k]) - b.values[k]));
  for (size_t k = 0; k < f.breakpoints.size(); ++k)
    worst = std::max(worst, std::abs(f.values[k] - b.value_at(f.breakpoints[k])));
  return worst;
}

}  // namespace rswz
