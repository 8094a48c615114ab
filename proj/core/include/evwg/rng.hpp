#pragma once

#include <cstdint>
#include <limits>

namespace evwg {

/// SplitMix64: a counter-based generator (state advances by a fixed odd
/// increment, output is a bijective mix of the counter). Streams for
/// different (seed, index, purpose) keys are derived with `stream_key`, so
/// every atom draws from its own stream regardless of scheduling.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t key) : counter_(key) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    counter_ += 0x9E3779B97F4A7C15ULL;
    return mix(counter_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t counter_;
};

enum class StreamPurpose : std::uint64_t {
  initial_position = 1,
  initial_momentum = 2,
  detection_cohort = 3,
};

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t index, StreamPurpose purpose) {
  std::uint64_t k = SplitMix64::mix(seed ^ 0x6A09E667F3BCC909ULL);
  k = SplitMix64::mix(k ^ (index + 0x9E3779B97F4A7C15ULL));
  k = SplitMix64::mix(k ^ (static_cast<std::uint64_t>(purpose) * 0xD1B54A32D192ED03ULL));
  return k;
}

}  // namespace evwg
