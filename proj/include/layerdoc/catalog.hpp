#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "layerdoc/error.hpp"
#include "layerdoc/histogram.hpp"
#include "layerdoc/image.hpp"
#include "layerdoc/io.hpp"
#include "layerdoc/labels.hpp"

namespace layerdoc {

/// One source crop: a text block, figure, or table image, with its gray
/// histogram precomputed once at load time.
struct Asset {
  std::string id;
  ClassLabel cls = ClassLabel::background;
  Raster raster;
  GrayHistogram gray_hist;
};

/// In-memory asset pool. Assets keep their manifest order; the per-class
/// index vectors below give the planner stable candidate pools.
struct Catalog {
  std::vector<Asset> assets;
  std::vector<std::size_t> text_indices;
  std::vector<std::size_t> image_indices;  // figures and tables

  void add(Asset asset) {
    if (by_id_.count(asset.id)) {
      fail(ErrorKind::validation, "duplicate asset id \"" + asset.id + "\"");
    }
    if (asset.raster.empty()) {
      fail(ErrorKind::validation, "asset \"" + asset.id + "\" has no pixels");
    }
    const std::size_t index = assets.size();
    by_id_.emplace(asset.id, index);
    if (asset.cls == ClassLabel::text) {
      text_indices.push_back(index);
    } else if (is_asset_class(asset.cls)) {
      image_indices.push_back(index);
    } else {
      fail(ErrorKind::validation,
           "asset \"" + asset.id + "\" has non-asset class \"" +
               std::string(class_name(asset.cls)) + "\"");
    }
    assets.push_back(std::move(asset));
  }

  const Asset* find(const std::string& id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &assets[it->second];
  }

  /// Planning needs at least one text block and one figure-or-table source.
  bool ready_for_planning() const {
    return !text_indices.empty() && !image_indices.empty();
  }

 private:
  std::unordered_map<std::string, std::size_t> by_id_;
};

/// Loads a catalog manifest: one `<class> <relative-path>` pair per line,
/// blank lines and `#` comments skipped. Paths resolve against `root` and
/// double as asset ids.
inline Catalog load_catalog(const std::filesystem::path& root,
                            const std::filesystem::path& manifest) {
  std::ifstream in(manifest);
  if (!in) {
    fail(ErrorKind::io, "cannot open catalog manifest: " + manifest.string());
  }

  Catalog catalog;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string trimmed = line;
    const auto first = trimmed.find_first_not_of(" \t\r");
    if (first == std::string::npos || trimmed[first] == '#') continue;
    const auto last = trimmed.find_last_not_of(" \t\r");
    trimmed = trimmed.substr(first, last - first + 1);

    std::istringstream fields(trimmed);
    std::string class_word;
    fields >> class_word;
    std::string rel_path;
    std::getline(fields, rel_path);
    const auto path_start = rel_path.find_first_not_of(" \t");
    if (path_start == std::string::npos) {
      fail(ErrorKind::validation, manifest.string() + ":" +
                                      std::to_string(line_no) +
                                      ": expected \"<class> <path>\"");
    }
    rel_path = rel_path.substr(path_start);

    Asset asset;
    asset.cls = class_from_name(class_word);
    if (!is_asset_class(asset.cls)) {
      fail(ErrorKind::validation,
           manifest.string() + ":" + std::to_string(line_no) +
               ": class \"" + class_word + "\" cannot appear in a catalog");
    }
    asset.id = rel_path;
    asset.raster = load_image(root / rel_path);
    asset.gray_hist = gray_histogram(asset.raster);
    catalog.add(std::move(asset));
  }

  if (catalog.assets.empty()) {
    fail(ErrorKind::validation,
         "catalog manifest lists no assets: " + manifest.string());
  }
  return catalog;
}

}  // namespace layerdoc
