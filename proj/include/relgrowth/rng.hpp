#pragma once

#include <cmath>
#include <cstdint>

namespace relgrowth {

/// One step of the splitmix64 generator. Used to expand seeds and to derive
/// independent per-replication streams.
inline std::uint64_t splitmix64_next(std::uint64_t& state) noexcept {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic pseudo-random generator: xoshiro256** 1.0 (Blackman/Vigna),
/// state expanded from the seed via splitmix64. Every stochastic routine in
/// the toolkit draws from this generator, so any result is bit-reproducible
/// from its seed, independent of platform or standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next_u64() noexcept {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform draw strictly inside (0, 1); never returns 0 or 1, so logs of
  /// either u or 1-u are finite.
  double uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform draw on [lo, hi).
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// Exponential variate with the given rate; strictly positive.
  double exponential(double rate) noexcept {
    return -std::log(uniform()) / rate;
  }

  /// Unbiased integer draw on [0, n).
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

/// Stream seed for replication `index`: one splitmix64 output keyed by both
/// values. Replications seeded this way are independent and may run in any
/// order (or concurrently) without changing per-replication results.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t state = seed ^ (0x632BE59BD9B4E019ULL * (index + 1));
  return splitmix64_next(state);
}

}  // namespace relgrowth
