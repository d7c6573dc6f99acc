#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace qsurvey {

/// Stateless counter-based generator. Every draw is a pure function of
/// (seed, lane, index), so any partition of indices across workers sees the
/// same numbers as a serial loop. Each lane is a SplitMix64 sequence started
/// at a hashed offset; index i yields the (i+1)-th output of that sequence.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : seed_(seed) {}

  constexpr std::uint64_t seed() const noexcept { return seed_; }

  constexpr std::uint64_t bits(std::uint64_t index, std::uint32_t lane = 0) const noexcept {
    std::uint64_t base = mix(seed_ ^ mix(0xA0761D6478BD642FULL + lane));
    return mix(base + (index + 1) * kGolden);
  }

  /// Uniform in [0, 1) on the 2^-53 grid.
  constexpr double uniform(std::uint64_t index, std::uint32_t lane = 0) const noexcept {
    return static_cast<double>(bits(index, lane) >> 11) * 0x1.0p-53;
  }

  /// Uniform in (0, 1].
  constexpr double uniform_open(std::uint64_t index, std::uint32_t lane = 0) const noexcept {
    return static_cast<double>((bits(index, lane) >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller on lanes (2·lane, 2·lane+1).
  double normal(std::uint64_t index, std::uint32_t lane = 0) const {
    double u1 = uniform_open(index, 2 * lane);
    double u2 = uniform(index, 2 * lane + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Independent generator for a named sub-stream.
  constexpr CounterRng derive(std::uint64_t stream) const noexcept {
    return CounterRng(mix(seed_ + (stream + 1) * 0xD1B54A32D192ED03ULL));
  }

 private:
  static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

  static constexpr std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace qsurvey
