#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace delab {

/// Which side of a bound a one-sided truncated normal draw lands on.
enum class TruncationSide { Above, Below };

/// Deterministic, seedable random source. All stochastic primitives of the
/// library flow through this type so that a run is fully reproducible from
/// its 64-bit seed.
///
/// Generator: xoshiro256** (Blackman & Vigna, "Scrambled linear pseudorandom
/// number generators", 2021). Xorshift family, period 2^256-1, 4-dimensionally
/// equidistributed. State is expanded from the seed with splitmix64 as the
/// authors recommend. Implemented locally instead of relying on std:: engines
/// so the stream is bit-identical on every platform and compiler.
class RngState {
 public:
  explicit RngState(std::uint64_t seed) : seed_(seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9E3779B97F4A7C15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
      z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
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

  /// Uniform draw in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform draw in [lo, hi).
  double uniform_range(double lo, double hi) {
    if (!(lo < hi)) throw std::invalid_argument("uniform_range: requires lo < hi");
    return lo + uniform01() * (hi - lo);
  }

  /// Uniform integer in [0, n-1], unbiased via rejection.
  std::uint64_t uniform_int(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("uniform_int: requires n >= 1");
    const std::uint64_t threshold = (0ULL - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  /// Gaussian draw via Box-Muller (two uniforms per call, no cached spare so
  /// the stream position stays a pure function of the call sequence).
  /// sigma = 0 returns mu and consumes nothing.
  double normal(double mu, double sigma) {
    if (sigma < 0.0) throw std::invalid_argument("normal: requires sigma >= 0");
    if (sigma == 0.0) return mu;
    const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
    const double u2 = uniform01();
    return mu + sigma * std::sqrt(-2.0 * std::log(u1)) *
                    std::cos(2.0 * std::numbers::pi * u2);
  }

  /// One-sided truncated normal: |N(0, sigma)| added to (Above) or
  /// subtracted from (Below) the bound, by folding rather than rejection.
  double truncated_normal_onesided(double bound, double sigma, TruncationSide side) {
    if (!(sigma > 0.0))
      throw std::invalid_argument("truncated_normal_onesided: requires sigma > 0");
    const double magnitude = std::abs(normal(0.0, sigma));
    return side == TruncationSide::Above ? bound + magnitude : bound - magnitude;
  }

  /// Uniform random permutation in place (Fisher-Yates).
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      const std::size_t j = static_cast<std::size_t>(uniform_int(i));
      std::swap(values[i - 1], values[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
};

}  // namespace delab
