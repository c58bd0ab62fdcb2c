#pragma once

#include <cstdint>
#include <limits>

namespace qnetfid {

/// Counter-based generator: draw i of stream s under seed k is a pure
/// function of (k, s, i), so Monte Carlo sample s gets the same numbers no
/// matter which thread evaluates it.
///
///   key    = mix(seed ^ mix(stream + golden))
///   draw_i = mix(key + (i + 1) * golden)
///
/// where mix is the SplitMix64 finaliser and golden = 0x9E3779B97F4A7C15.
class CounterRng {
 public:
  static constexpr const char* kAlgorithm = "splitmix64-ctr-v1";
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : key_(mix(seed ^ mix(stream + kGolden))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t operator()() noexcept { return mix(key_ + (++counter_) * kGolden); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound > 0 (rejection sampling, unbiased).
  std::uint64_t below(std::uint64_t bound) noexcept {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace qnetfid
