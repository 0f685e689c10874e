#pragma once

#include <cstdint>

namespace layerdoc {

/// splitmix64 stream generator. Chosen because it is tiny, fast, fully
/// portable (64-bit integer arithmetic only), and doubles as the seed mixer
/// for per-page streams. One raw 64-bit output is consumed per draw, so the
/// draw sequence of a consumer is auditable from its documented call order.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit constexpr SplitMix64(std::uint64_t seed) : state(seed) {}

  constexpr std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0,1): top 53 bits of one output.
  double next_unit() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0,n): floor(next_unit()*n). n must be >= 1. The
  /// floor mapping is deliberate so that integer draws and the interval
  /// sampling operations share one documented convention.
  std::uint64_t next_below(std::uint64_t n) {
    auto v = static_cast<std::uint64_t>(next_unit() * static_cast<double>(n));
    return v >= n ? n - 1 : v;
  }
};

/// Per-page seed: the (page_index+1)-th output of a splitmix64 stream seeded
/// with the master seed. O(1), so pages are independently reproducible.
inline constexpr std::uint64_t page_seed(std::uint64_t master_seed,
                                         std::uint64_t page_index) {
  std::uint64_t z = master_seed + (page_index + 1) * 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace layerdoc
