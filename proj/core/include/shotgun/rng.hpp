#pragma once

#include <cstdint>
#include <limits>

namespace shotgun {

/// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

/// Child stream key for `index` under `base`. Used for per-trial and
/// per-cell streams so a trial's randomness does not depend on scheduling.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
  return mix64(base ^ mix64(index + kGoldenGamma));
}

/// Counter-based generator: the i-th output is mix64(key + (i + 1) * gamma),
/// i.e. SplitMix64 with an explicit counter. Identical output on every
/// platform, and any stream can be split with derive_seed.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit constexpr CounterRng(std::uint64_t key) : key_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  constexpr result_type operator()() {
    ++counter_;
    return mix64(key_ + counter_ * kGoldenGamma);
  }

  /// Unbiased integer in [0, bound): rejects the 2^64 mod bound lowest words.
  constexpr std::uint64_t uniform(std::uint64_t bound) {
    if (bound <= 1) return 0;
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = (*this)();
      if (x >= threshold) return x % bound;
    }
  }

  /// Double in [0, 1) from the top 53 bits.
  constexpr double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  constexpr std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace shotgun
