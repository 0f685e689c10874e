#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "layerdoc/error.hpp"
#include "layerdoc/image.hpp"

namespace layerdoc {

/// The four page classes. Background is the unpainted canvas and is never an
/// asset class.
enum class ClassLabel : std::uint8_t {
  background = 0,
  text = 1,
  figure = 2,
  table = 3,
};

inline constexpr int class_count = 4;

inline constexpr const char* class_name(ClassLabel c) {
  switch (c) {
    case ClassLabel::background: return "background";
    case ClassLabel::text: return "text";
    case ClassLabel::figure: return "figure";
    case ClassLabel::table: return "table";
  }
  return "background";
}

/// Fixed visualization colors: figure red, table blue, text green,
/// background black.
inline constexpr Rgb class_color(ClassLabel c) {
  switch (c) {
    case ClassLabel::background: return Rgb{0, 0, 0};
    case ClassLabel::text: return Rgb{0, 255, 0};
    case ClassLabel::figure: return Rgb{255, 0, 0};
    case ClassLabel::table: return Rgb{0, 0, 255};
  }
  return Rgb{0, 0, 0};
}

inline ClassLabel class_from_name(std::string_view name) {
  if (name == "background") return ClassLabel::background;
  if (name == "text") return ClassLabel::text;
  if (name == "figure") return ClassLabel::figure;
  if (name == "table") return ClassLabel::table;
  fail(ErrorKind::schema, "unknown class \"" + std::string(name) + "\"");
}

inline constexpr bool is_asset_class(ClassLabel c) {
  return c == ClassLabel::text || c == ClassLabel::figure ||
         c == ClassLabel::table;
}

}  // namespace layerdoc
