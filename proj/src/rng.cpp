#include "photocorr/rng.hpp"

#include <cmath>
#include <numbers>

namespace photocorr {

double Rng::normal() noexcept {
  if (has_cached_) {
    has_cached_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  cached_normal_ = r * std::sin(phi);
  has_cached_ = true;
  return r * std::cos(phi);
}

double Rng::exponential() noexcept { return -std::log(uniform_open()); }

std::uint64_t Rng::bernoulli_count(std::uint64_t trials, double p) noexcept {
  if (p >= 1.0) return trials;
  if (p <= 0.0) return 0;
  std::uint64_t kept = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    if (uniform() < p) ++kept;
  }
  return kept;
}

NormalPair counter_normal_pair(std::uint64_t key, std::uint64_t counter) noexcept {
  const std::uint64_t base = key + 2 * counter * 0x9E3779B97F4A7C15ULL;
  const std::uint64_t h1 = mix64(base + 0x9E3779B97F4A7C15ULL);
  const std::uint64_t h2 = mix64(base + 2 * 0x9E3779B97F4A7C15ULL);
  const double u1 = (static_cast<double>(h1 >> 11) + 0.5) * 0x1.0p-53;
  const double u2 = static_cast<double>(h2 >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(phi), r * std::sin(phi)};
}

}  // namespace photocorr
