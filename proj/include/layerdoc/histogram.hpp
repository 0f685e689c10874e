#pragma once

#include <array>
#include <cstdint>

#include "layerdoc/error.hpp"
#include "layerdoc/image.hpp"

namespace layerdoc {

/// Normalized 256-bin distribution of gray values over an image. Bins sum to
/// 1 (within float tolerance) and every bin lies in [0,1].
struct GrayHistogram {
  std::array<double, 256> bins{};

  friend bool operator==(const GrayHistogram&, const GrayHistogram&) = default;
};

/// bin_i = (#pixels whose gray value is i) / (width * height).
inline GrayHistogram gray_histogram(const Raster& raster) {
  if (raster.empty()) {
    fail(ErrorKind::domain, "gray_histogram: empty raster");
  }
  std::array<std::uint64_t, 256> counts{};
  for (const Rgb& c : raster.px) {
    ++counts[gray_value(c)];
  }
  GrayHistogram h;
  const double total = static_cast<double>(raster.px.size());
  for (int i = 0; i < 256; ++i) {
    h.bins[i] = static_cast<double>(counts[i]) / total;
  }
  return h;
}

}  // namespace layerdoc
