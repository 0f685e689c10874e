#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "layerdoc/config.hpp"
#include "layerdoc/error.hpp"
#include "layerdoc/labels.hpp"
#include "layerdoc/planner.hpp"
#include "layerdoc/version.hpp"

namespace layerdoc {

/// One generated page as recorded in the dataset manifest.
struct PageRecord {
  std::int64_t page_id = 0;
  std::uint64_t seed = 0;
  int width = 0;
  int height = 0;
  std::string raster_path;
  std::string mask_path;
  std::string mask_vis_path;
  std::string annotation_ref;  // "<xml file>#<image id>"
  int relaxed_count = 0;
  std::uint64_t similarity_evals = 0;
  int placement_count = 0;  // image (figure/table) placements only
  int text_count = 0;
  int dropped_polygons = 0;
  std::array<std::uint64_t, class_count> class_pixels{};
  std::vector<Placement> placements;

  bool operator==(const PageRecord&) const = default;
};

/// Everything needed to audit or reproduce a run: the exact config, the
/// per-page seeds, and where every output file lives. Only created_at and
/// tool_version may differ between reruns of the same inputs.
struct DatasetManifest {
  std::string tool_version = version_string;
  std::string created_at;  // ISO-8601 UTC
  SynthConfig config;
  std::vector<PageRecord> pages;
};

namespace detail {

inline nlohmann::ordered_json placement_to_json(const Placement& p) {
  nlohmann::ordered_json j;
  j["asset_id"] = p.asset_id;
  j["class"] = class_name(p.cls);
  j["x"] = p.x;
  j["y"] = p.y;
  j["scale_x"] = p.scale_x;
  j["scale_y"] = p.scale_y;
  j["target_w"] = p.target_w;
  j["target_h"] = p.target_h;
  j["z"] = p.z;
  return j;
}

inline Placement placement_from_json(const nlohmann::json& j) {
  Placement p;
  p.asset_id = j.at("asset_id").get<std::string>();
  p.cls = class_from_name(j.at("class").get<std::string>());
  p.x = j.at("x").get<int>();
  p.y = j.at("y").get<int>();
  p.scale_x = j.at("scale_x").get<double>();
  p.scale_y = j.at("scale_y").get<double>();
  p.target_w = j.at("target_w").get<int>();
  p.target_h = j.at("target_h").get<int>();
  p.z = j.at("z").get<int>();
  return p;
}

}  // namespace detail

inline nlohmann::ordered_json manifest_to_json(const DatasetManifest& m) {
  nlohmann::ordered_json j;
  j["tool_version"] = m.tool_version;
  j["created_at"] = m.created_at;
  j["config"] = config_to_json(m.config);
  j["pages"] = nlohmann::ordered_json::array();
  for (const PageRecord& page : m.pages) {
    nlohmann::ordered_json record;
    record["page_id"] = page.page_id;
    record["seed"] = page.seed;
    record["width"] = page.width;
    record["height"] = page.height;
    record["raster_path"] = page.raster_path;
    record["mask_path"] = page.mask_path;
    record["mask_vis_path"] = page.mask_vis_path;
    record["annotation_ref"] = page.annotation_ref;
    record["relaxed_count"] = page.relaxed_count;
    record["similarity_evals"] = page.similarity_evals;
    record["placement_count"] = page.placement_count;
    record["text_count"] = page.text_count;
    record["dropped_polygons"] = page.dropped_polygons;
    record["class_pixels"] = page.class_pixels;
    record["placements"] = nlohmann::ordered_json::array();
    for (const Placement& p : page.placements) {
      record["placements"].push_back(detail::placement_to_json(p));
    }
    j["pages"].push_back(std::move(record));
  }
  return j;
}

inline DatasetManifest manifest_from_json(const nlohmann::json& j) {
  try {
    DatasetManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.created_at = j.at("created_at").get<std::string>();
    m.config = config_from_json(j.at("config"));
    for (const nlohmann::json& record : j.at("pages")) {
      PageRecord page;
      page.page_id = record.at("page_id").get<std::int64_t>();
      page.seed = record.at("seed").get<std::uint64_t>();
      page.width = record.at("width").get<int>();
      page.height = record.at("height").get<int>();
      page.raster_path = record.at("raster_path").get<std::string>();
      page.mask_path = record.at("mask_path").get<std::string>();
      page.mask_vis_path = record.at("mask_vis_path").get<std::string>();
      page.annotation_ref = record.at("annotation_ref").get<std::string>();
      page.relaxed_count = record.at("relaxed_count").get<int>();
      page.similarity_evals = record.at("similarity_evals")
                                  .get<std::uint64_t>();
      page.placement_count = record.at("placement_count").get<int>();
      page.text_count = record.at("text_count").get<int>();
      page.dropped_polygons = record.at("dropped_polygons").get<int>();
      const nlohmann::json& pixels = record.at("class_pixels");
      if (!pixels.is_array() || pixels.size() != class_count) {
        fail(ErrorKind::parse, "class_pixels must hold one entry per class");
      }
      for (int c = 0; c < class_count; ++c) {
        page.class_pixels[c] = pixels[c].get<std::uint64_t>();
      }
      for (const nlohmann::json& p : record.at("placements")) {
        page.placements.push_back(detail::placement_from_json(p));
      }
      m.pages.push_back(std::move(page));
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse, std::string("corrupt manifest: ") + e.what());
  }
}

inline void save_manifest(const std::filesystem::path& path,
                          const DatasetManifest& m) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io, "cannot write manifest: " + path.string());
  out << manifest_to_json(m).dump(2) << '\n';
}

inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io, "cannot open manifest: " + path.string());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse,
         "corrupt manifest: " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace layerdoc
