#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "layerdoc/error.hpp"

namespace layerdoc {

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// 8-bit RGB pixel grid, row-major, origin at the top-left corner.
struct Raster {
  int width = 0;
  int height = 0;
  std::vector<Rgb> px;

  Raster() = default;
  Raster(int w, int h, Rgb fill = Rgb{255, 255, 255})
      : width(w), height(h), px(static_cast<std::size_t>(w) * h, fill) {}

  bool empty() const { return width <= 0 || height <= 0; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  Rgb& at(int x, int y) { return px[index(x, y)]; }
  const Rgb& at(int x, int y) const { return px[index(x, y)]; }

  friend bool operator==(const Raster&, const Raster&) = default;
};

/// Per-pixel class-code grid matching a Raster. Values are class codes 0-3.
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> v;

  Mask() = default;
  Mask(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), v(static_cast<std::size_t>(w) * h, fill) {}

  bool empty() const { return width <= 0 || height <= 0; }
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(y) * width + x;
  }
  std::uint8_t& at(int x, int y) { return v[index(x, y)]; }
  std::uint8_t at(int x, int y) const { return v[index(x, y)]; }

  friend bool operator==(const Mask&, const Mask&) = default;
};

/// ITU-R BT.601 luma, rounded half-up and clamped to [0,255].
inline std::uint8_t gray_value(Rgb c) {
  double y = 0.299 * c.r + 0.587 * c.g + 0.114 * c.b;
  double r = std::floor(y + 0.5);
  if (r < 0.0) r = 0.0;
  if (r > 255.0) r = 255.0;
  return static_cast<std::uint8_t>(r);
}

}  // namespace layerdoc
