#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "rswz/model.hpp"

namespace rswz {

// Realization of the jump process J on [0, T]. regimes[k] is active on
// [epochs[k], epochs[k+1]); the first epoch is always 0.
struct JumpPath {
  double T = 0.0;
  std::vector<double> epochs;
  std::vector<Regime> regimes;

  // Cadlag evaluation: the regime active at time t.
  Regime regime_at(double t) const;
};

struct HomogeneousMarkov {
  std::vector<std::vector<double>> Q;  // non-negative off-diagonal, zero row sums
};

struct InhomogeneousMarkov {
  std::function<std::vector<std::vector<double>>(double)> Q_of_t;
  double c = 0.0;  // uniform intensity bound: c >= sup_t max_i |Q_ii(t)|
  int n = 0;       // state count
};

struct SemiMarkov {
  struct Holding {
    enum Kind { exponential, weibull, fixed } kind = exponential;
    double a = 1.0;  // rate / shape / duration
    double b = 1.0;  // scale (weibull only)
  };
  std::vector<Holding> holding;          // per regime
  std::vector<std::vector<double>> P;    // transition matrix, zero diagonal
};

struct DeterministicSchedule {
  std::vector<double> epochs;   // starting with 0
  std::vector<Regime> regimes;  // regimes[0] must equal the requested j0
};

using JumpGenerator =
    std::variant<HomogeneousMarkov, InhomogeneousMarkov, SemiMarkov, DeterministicSchedule>;

// Throws ConfigError on malformed parameters (negative off-diagonals, nonzero
// row sums, self-transitions, unsorted schedules).
void validate_generator(const JumpGenerator& gen);

JumpPath sample_jump_path(const JumpGenerator& gen, Regime j0, double T, std::uint64_t seed);

// Number of epochs in (0, T']; an epoch exactly at T' counts.
int count_jumps(const JumpPath& path, double t_prime);

struct PoissonTail {
  double exact_tail = 0.0;      // P(Poisson(c) >= n)
  double stirling_bound = 0.0;  // n^{-1/2} exp(-n(log n - log c - 1)), 1 at n = 0
};

PoissonTail poisson_tail_bound(int n, double c);

}  // namespace rswz
