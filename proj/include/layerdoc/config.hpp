#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "layerdoc/error.hpp"

namespace layerdoc {

/// Knobs for page planning. Every field has a usable default; a config file
/// only lists the fields it wants to override.
struct SynthConfig {
  int page_width = 1240;    // A4 at 150 dpi
  int page_height = 1754;
  double scale_min = 0.6;
  double scale_max = 1.0;
  int count_min = 1;
  int count_max = 8;
  double similarity_threshold = 0.5;
  int max_attempts = 50;
  bool aesthetic_guidance = true;
  int text_columns_min = 1;
  int text_columns_max = 3;
  int column_gutter = 16;
  std::uint64_t master_seed = 0;

  bool operator==(const SynthConfig&) const = default;
};

/// Scale interval used when aesthetic guidance is off: gating and aspect
/// preservation are disabled and each axis is stretched independently.
inline constexpr double ablation_scale_min = 0.3;
inline constexpr double ablation_scale_max = 1.2;

inline void validate_config(const SynthConfig& c) {
  if (c.page_width < 1 || c.page_height < 1) {
    fail(ErrorKind::config, "page dimensions must be positive");
  }
  if (c.aesthetic_guidance &&
      !(0.0 < c.scale_min && c.scale_min <= c.scale_max &&
        c.scale_max <= 1.0)) {
    fail(ErrorKind::config, "scale interval must satisfy 0 < min <= max <= 1");
  }
  if (!(1 <= c.count_min && c.count_min <= c.count_max)) {
    fail(ErrorKind::config, "image count range must satisfy 1 <= min <= max");
  }
  if (!(0.0 <= c.similarity_threshold && c.similarity_threshold <= 1.0)) {
    fail(ErrorKind::config, "similarity_threshold must be in [0,1]");
  }
  if (c.max_attempts < 1) {
    fail(ErrorKind::config, "max_attempts must be at least 1");
  }
  if (!(1 <= c.text_columns_min && c.text_columns_min <= c.text_columns_max)) {
    fail(ErrorKind::config, "text_columns_range must satisfy 1 <= min <= max");
  }
  if (c.column_gutter < 0) {
    fail(ErrorKind::config, "column_gutter must be non-negative");
  }
}

inline nlohmann::ordered_json config_to_json(const SynthConfig& c) {
  nlohmann::ordered_json j;
  j["page_width"] = c.page_width;
  j["page_height"] = c.page_height;
  j["scale_min"] = c.scale_min;
  j["scale_max"] = c.scale_max;
  j["count_min"] = c.count_min;
  j["count_max"] = c.count_max;
  j["similarity_threshold"] = c.similarity_threshold;
  j["max_attempts"] = c.max_attempts;
  j["aesthetic_guidance"] = c.aesthetic_guidance;
  j["text_columns_range"] = {c.text_columns_min, c.text_columns_max};
  j["column_gutter"] = c.column_gutter;
  j["master_seed"] = c.master_seed;
  return j;
}

/// Parses a config JSON object. Fields not present keep their defaults;
/// unknown keys are rejected so typos cannot silently disable an option.
inline SynthConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) {
    fail(ErrorKind::config, "config root must be a JSON object");
  }
  SynthConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "page_width") {
        c.page_width = value.get<int>();
      } else if (key == "page_height") {
        c.page_height = value.get<int>();
      } else if (key == "scale_min") {
        c.scale_min = value.get<double>();
      } else if (key == "scale_max") {
        c.scale_max = value.get<double>();
      } else if (key == "count_min") {
        c.count_min = value.get<int>();
      } else if (key == "count_max") {
        c.count_max = value.get<int>();
      } else if (key == "similarity_threshold") {
        c.similarity_threshold = value.get<double>();
      } else if (key == "max_attempts") {
        c.max_attempts = value.get<int>();
      } else if (key == "aesthetic_guidance") {
        c.aesthetic_guidance = value.get<bool>();
      } else if (key == "text_columns_range") {
        if (!value.is_array() || value.size() != 2) {
          fail(ErrorKind::config,
               "text_columns_range must be a two-element array");
        }
        c.text_columns_min = value[0].get<int>();
        c.text_columns_max = value[1].get<int>();
      } else if (key == "column_gutter") {
        c.column_gutter = value.get<int>();
      } else if (key == "master_seed") {
        c.master_seed = value.get<std::uint64_t>();
      } else {
        fail(ErrorKind::config, "unknown config key \"" + key + "\"");
      }
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::config,
           "config key \"" + key + "\": " + std::string(e.what()));
    }
  }
  validate_config(c);
  return c;
}

inline SynthConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open config file: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::config,
         "config is not valid JSON: " + path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

}  // namespace layerdoc
