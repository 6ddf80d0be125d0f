// Seedable random number generation.  The engine is std::mt19937_64 (bit-exact
// across platforms by the standard); the variate transforms are written out
// explicitly instead of using std::*_distribution so the draw streams do not
// depend on the standard-library implementation.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

namespace lora {

/// SplitMix64 step; used to derive well-separated per-cell seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Deterministic seed for one (base seed, cell index) pair of a sweep grid.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t cell) {
  return splitmix64(base ^ splitmix64(cell));
}

class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [0, 1]; used where the closed endpoint is meaningful.
  double uniform_closed() {
    return static_cast<double>(engine_() >> 11) / static_cast<double>((1ull << 53) - 1);
  }

  /// Unit-mean exponential (Rayleigh power fading).
  double exponential() {
    return -std::log1p(-uniform());
  }

  /// Poisson with mean lambda.  Multiplication method on chunks of at most 500
  /// so exp(-lambda) never underflows; Poisson(a + b) = Poisson(a) + Poisson(b).
  std::uint64_t poisson(double lambda) {
    std::uint64_t n = 0;
    while (lambda > 0.0) {
      const double chunk = std::min(lambda, 500.0);
      lambda -= chunk;
      const double limit = std::exp(-chunk);
      double prod = uniform();
      while (prod >= limit) {
        ++n;
        prod *= uniform();
      }
    }
    return n;
  }

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
};

} // namespace lora
