#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace spherebl {

/// Name recorded in every report next to the seed.
inline constexpr std::string_view kRngAlgorithm = "splitmix64-counter";

/// SplitMix64 finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Independent key for sub-stream `stream` of `seed` (shards, grid points).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(mix64(seed) ^ mix64(~stream));
}

/// Counter-based generator: the k-th draw is mix64(key + k * golden), so any
/// draw is a pure function of (key, k).
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  std::uint64_t next() noexcept {
    return mix64(key_ + 0x9e3779b97f4a7c15ULL * counter_++);
  }

  /// Uniform on (0, 1); never returns 0 so log() is safe.
  double uniform() noexcept {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal by Box-Muller, pairs cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace spherebl
