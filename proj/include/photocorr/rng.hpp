#pragma once

#include <cstdint>
#include <limits>

namespace photocorr {

/// SplitMix64 finalizer; a bijective 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Tags separating independent families of substreams derived from one seed.
enum class StreamTag : std::uint64_t {
  pulse = 1,
  field_noise = 2,
  field_clicks = 3,
  detector = 4,
  bootstrap = 5,
  poisson = 6,
};

/// Counter-based key for substream `index` of family `tag` under `seed`.
/// Keys depend only on (seed, tag, index), never on how work is scheduled.
constexpr std::uint64_t substream_key(std::uint64_t seed, StreamTag tag,
                                      std::uint64_t index) noexcept {
  std::uint64_t k = mix64(seed + 0x9E3779B97F4A7C15ULL);
  k = mix64(k ^ (static_cast<std::uint64_t>(tag) * 0xD1B54A32D192ED03ULL));
  return mix64(k + index * 0x9E3779B97F4A7C15ULL);
}

/// Small splittable generator (SplitMix64 sequence). Satisfies
/// UniformRandomBitGenerator so it can drive <random> distributions.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t key) noexcept : state_(key) {}

  static Rng substream(std::uint64_t seed, StreamTag tag, std::uint64_t index) noexcept {
    return Rng(substream_key(seed, tag, index));
  }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix64(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() noexcept {
    return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal deviate (Box-Muller, second value cached).
  double normal() noexcept;

  /// Unit-rate exponential deviate.
  double exponential() noexcept;

  /// Number of successes in `trials` independent Bernoulli(p) draws.
  std::uint64_t bernoulli_count(std::uint64_t trials, double p) noexcept;

 private:
  std::uint64_t state_;
  double cached_normal_ = 0.0;
  bool has_cached_ = false;
};

/// Stateless standard normal pair keyed by a counter; used where the same
/// noise sample must be reproducible from its index alone.
struct NormalPair {
  double a;
  double b;
};
NormalPair counter_normal_pair(std::uint64_t key, std::uint64_t counter) noexcept;

}  // namespace photocorr
