#include "rswz/jumps.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "rswz/errors.hpp"
#include "rswz/rng.hpp"

namespace rswz {

namespace {

void check_rate_matrix(const std::vector<std::vector<double>>& Q, const char* ctx) {
  const size_t n = Q.size();
  if (n < 2) throw ConfigError(std::string(ctx) + ": need at least 2 states");
  for (size_t i = 0; i < n; ++i) {
    if (Q[i].size() != n) throw ConfigError(std::string(ctx) + ": rate matrix not square");
    double row = 0.0;
    for (size_t j = 0; j < n; ++j) {
      if (j != i && Q[i][j] < 0.0)
        throw ConfigError(std::string(ctx) + ": negative off-diagonal rate");
      row += Q[i][j];
    }
    if (std::abs(row) > 1e-12)
      throw ConfigError(std::string(ctx) + ": rate matrix row sum not zero");
  }
}

double sample_holding(const SemiMarkov::Holding& h, Rng& rng) {
  switch (h.kind) {
    case SemiMarkov::Holding::exponential:
      return rng.exponential(h.a);
    case SemiMarkov::Holding::weibull:
      return rng.weibull(h.a, h.b);
    case SemiMarkov::Holding::fixed:
      return h.a;
  }
  throw ConfigError("semi-markov: unknown holding kind");
}

Regime pick_target(const std::vector<double>& weights, Regime self, double total, Rng& rng) {
  double u = rng.uniform() * total;
  for (size_t j = 0; j < weights.size(); ++j) {
    if (static_cast<Regime>(j) == self) continue;
    u -= weights[j];
    if (u <= 0.0) return static_cast<Regime>(j);
  }
  for (size_t j = weights.size(); j-- > 0;)
    if (static_cast<Regime>(j) != self && weights[j] > 0.0) return static_cast<Regime>(j);
  throw ConfigError("jump sampling: no admissible target state");
}

}  // namespace

Regime JumpPath::regime_at(double t) const {
  auto it = std::upper_bound(epochs.begin(), epochs.end(), t);
  const size_t k = static_cast<size_t>(it - epochs.begin());
  return regimes[k == 0 ? 0 : k - 1];
}

void validate_generator(const JumpGenerator& gen) {
  if (const auto* hm = std::get_if<HomogeneousMarkov>(&gen)) {
    check_rate_matrix(hm->Q, "homogeneous-markov");
  } else if (const auto* im = std::get_if<InhomogeneousMarkov>(&gen)) {
    if (!im->Q_of_t) throw ConfigError("inhomogeneous-markov: missing Q(t)");
    if (im->n < 2) throw ConfigError("inhomogeneous-markov: need at least 2 states");
    if (im->c <= 0.0) throw ConfigError("inhomogeneous-markov: intensity bound c must be positive");
  } else if (const auto* sm = std::get_if<SemiMarkov>(&gen)) {
    const size_t n = sm->holding.size();
    if (n < 2) throw ConfigError("semi-markov: need at least 2 states");
    if (sm->P.size() != n) throw ConfigError("semi-markov: transition matrix shape mismatch");
    for (size_t i = 0; i < n; ++i) {
      if (sm->P[i].size() != n) throw ConfigError("semi-markov: transition matrix not square");
      if (sm->P[i][i] != 0.0)
        throw ConfigError("semi-markov: self-transitions are forbidden");
      double row = 0.0;
      for (double p : sm->P[i]) {
        if (p < 0.0) throw ConfigError("semi-markov: negative transition probability");
        row += p;
      }
      if (std::abs(row - 1.0) > 1e-12)
        throw ConfigError("semi-markov: transition matrix row must sum to 1");
      const auto& h = sm->holding[i];
      if (h.kind == SemiMarkov::Holding::weibull && (h.a <= 0.0 || h.b <= 0.0))
        throw ConfigError("semi-markov: weibull parameters must be positive");
      if (h.kind != SemiMarkov::Holding::weibull && h.a <= 0.0)
        throw ConfigError("semi-markov: holding parameter must be positive");
    }
  } else if (const auto* ds = std::get_if<DeterministicSchedule>(&gen)) {
    if (ds->epochs.empty() || ds->epochs[0] != 0.0)
      throw ConfigError("deterministic schedule: first epoch must be 0");
    if (ds->epochs.size() != ds->regimes.size())
      throw ConfigError("deterministic schedule: epochs/regimes length mismatch");
    for (size_t k = 1; k < ds->epochs.size(); ++k) {
      if (ds->epochs[k] <= ds->epochs[k - 1])
        throw ConfigError("deterministic schedule: epochs must be strictly increasing");
      if (ds->regimes[k] == ds->regimes[k - 1])
        throw ConfigError("deterministic schedule: regime must change at every epoch");
    }
  }
}

JumpPath sample_jump_path(const JumpGenerator& gen, Regime j0, double T, std::uint64_t seed) {
  if (T <= 0.0) throw ConfigError("sample_jump_path: horizon must be positive");
  validate_generator(gen);
  JumpPath path;
  path.T = T;
  path.epochs.push_back(0.0);
  path.regimes.push_back(j0);
  Rng rng(seed);

  if (const auto* hm = std::get_if<HomogeneousMarkov>(&gen)) {
    if (j0 < 0 || static_cast<size_t>(j0) >= hm->Q.size())
      throw ConfigError("sample_jump_path: j0 out of range");
    double t = 0.0;
    Regime j = j0;
    for (;;) {
      const double rate = -hm->Q[static_cast<size_t>(j)][static_cast<size_t>(j)];
      if (rate <= 0.0) break;  // absorbing
      t += rng.exponential(rate);
      if (t > T) break;
      j = pick_target(hm->Q[static_cast<size_t>(j)], j, rate, rng);
      path.epochs.push_back(t);
      path.regimes.push_back(j);
    }
  } else if (const auto* im = std::get_if<InhomogeneousMarkov>(&gen)) {
    if (j0 < 0 || j0 >= im->n) throw ConfigError("sample_jump_path: j0 out of range");
    // Poisson thinning against the uniform bound c.
    double t = 0.0;
    Regime j = j0;
    for (;;) {
      t += rng.exponential(im->c);
      if (t > T) break;
      const auto Q = im->Q_of_t(t);
      const double rate = -Q[static_cast<size_t>(j)][static_cast<size_t>(j)];
      if (rate > im->c * (1.0 + 1e-12)) {
        char msg[128];
        std::snprintf(msg, sizeof(msg),
                      "inhomogeneous-markov: |Q_ii(t)| = %.6g exceeds declared bound c = %.6g",
                      rate, im->c);
        throw ConfigError(msg);
      }
      if (rng.uniform() * im->c <= rate) {
        j = pick_target(Q[static_cast<size_t>(j)], j, rate, rng);
        path.epochs.push_back(t);
        path.regimes.push_back(j);
      }
    }
  } else if (const auto* sm = std::get_if<SemiMarkov>(&gen)) {
    if (j0 < 0 || static_cast<size_t>(j0) >= sm->holding.size())
      throw ConfigError("sample_jump_path: j0 out of range");
    double t = 0.0;
    Regime j = j0;
    for (;;) {
      t += sample_holding(sm->holding[static_cast<size_t>(j)], rng);
      if (t > T) break;
      j = pick_target(sm->P[static_cast<size_t>(j)], j, 1.0, rng);
      path.epochs.push_back(t);
      path.regimes.push_back(j);
    }
  } else if (const auto* ds = std::get_if<DeterministicSchedule>(&gen)) {
    if (ds->regimes[0] != j0)
      throw ConfigError("deterministic schedule: regimes[0] must match the requested j0");
    for (size_t k = 1; k < ds->epochs.size(); ++k) {
      if (ds->epochs[k] > T) break;
      path.epochs.push_back(ds->epochs[k]);
      path.regimes.push_back(ds->regimes[k]);
    }
  }
  return path;
}

int count_jumps(const JumpPath& path, double t_prime) {
  if (!(t_prime > 0.0) || t_prime > path.T)
    throw ConfigError("count_jumps: T' must lie in (0, T]");
  int n = 0;
  for (size_t k = 1; k < path.epochs.size(); ++k)
    if (path.epochs[k] <= t_prime) ++n;
  return n;
}

PoissonTail poisson_tail_bound(int n, double c) {
  if (n < 0 || c <= 0.0) throw ConfigError("poisson_tail_bound: need n >= 0, c > 0");
  PoissonTail out;
  if (n == 0) {
    out.exact_tail = 1.0;
    out.stirling_bound = 1.0;
    return out;
  }
  // Upper tail summed from k = n with a log-space leading term; the term
  // recurrence keeps every summand positive so there is no cancellation.
  double term = std::exp(n * std::log(c) - c - std::lgamma(n + 1.0));
  double sum = term;
  for (int k = n; k < n + 2000; ++k) {
    term *= c / (k + 1.0);
    sum += term;
    if (term < sum * 1e-18 && k > c) break;
  }
  out.exact_tail = std::min(sum, 1.0);
  out.stirling_bound = std::exp(-0.5 * std::log(n) - n * (std::log(n) - std::log(c) - 1.0));
  return out;
}

}  // namespace rswz
