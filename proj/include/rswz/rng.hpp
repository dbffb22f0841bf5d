#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace rswz {

// SplitMix64 finalizer. Used both as a seed mixer and inside derive_seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-cell seed derivation: one master seed fans out to
// independent streams keyed by two indices (e.g. lambda index, path index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = mix64(master ^ 0x8e98c0e558ca26bfULL);
  s = mix64(s ^ (a + 0xd6e8feb86659fd93ULL));
  s = mix64(s ^ (b + 0xa5a5a5a5a5a5a5a5ULL));
  return s;
}

// All sampling goes through explicit transforms of mt19937_64 output so that
// every stream is reproducible across platforms and library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on (0,1); never returns 0 or 1.
  double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53; }

  // Box-Muller without caching: two uniforms per normal draw.
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double weibull(double shape, double scale) {
    return scale * std::pow(-std::log(uniform()), 1.0 / shape);
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rswz
