#pragma once

// Shared helpers for the unit and acceptance suites: temp directories,
// procedural assets and catalogs, and independent brute-force oracles the
// library results are checked against.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <layerdoc/layerdoc.hpp>

namespace support {

namespace ld = layerdoc;

/// Self-deleting temporary directory.
class TempDir {
 public:
  TempDir() {
    std::string pattern =
        (std::filesystem::temp_directory_path() / "layerdoc_test_XXXXXX")
            .string();
    if (!mkdtemp(pattern.data())) {
      throw std::runtime_error("mkdtemp failed");
    }
    path_ = pattern;
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

inline ld::Raster solid_raster(int w, int h, ld::Rgb color) {
  ld::Raster r(w, h);
  for (ld::Rgb& px : r.px) px = color;
  return r;
}

/// Raster whose pixel i carries gray value grays[i % grays.size()], laid
/// out row-major. Gray pixels keep their value through the luma formula,
/// so the gray histogram is exactly the multiset of values.
inline ld::Raster raster_from_grays(int w, int h,
                                    const std::vector<std::uint8_t>& grays) {
  ld::Raster r(w, h);
  for (std::size_t i = 0; i < r.px.size(); ++i) {
    const std::uint8_t g = grays[i % grays.size()];
    r.px[i] = ld::Rgb{g, g, g};
  }
  return r;
}

inline ld::Asset make_asset(const std::string& id, ld::ClassLabel cls,
                            ld::Raster raster) {
  ld::Asset asset;
  asset.id = id;
  asset.cls = cls;
  asset.gray_hist = ld::gray_histogram(raster);
  asset.raster = std::move(raster);
  return asset;
}

inline ld::Asset make_solid_asset(const std::string& id, ld::ClassLabel cls,
                                  int w, int h, ld::Rgb color) {
  return make_asset(id, cls, solid_raster(w, h, color));
}

/// Mixed catalog whose assets all share one gray level per class family,
/// so default-threshold gating passes and pages plan without relaxation.
inline ld::Catalog standard_catalog() {
  ld::Catalog catalog;
  catalog.add(make_solid_asset("text/a", ld::ClassLabel::text, 400, 90,
                               ld::Rgb{40, 40, 40}));
  catalog.add(make_solid_asset("text/b", ld::ClassLabel::text, 500, 140,
                               ld::Rgb{60, 60, 60}));
  catalog.add(make_solid_asset("fig/a", ld::ClassLabel::figure, 300, 200,
                               ld::Rgb{120, 120, 120}));
  catalog.add(make_solid_asset("fig/b", ld::ClassLabel::figure, 240, 320,
                               ld::Rgb{120, 120, 120}));
  catalog.add(make_solid_asset("tab/a", ld::ClassLabel::table, 280, 180,
                               ld::Rgb{120, 120, 120}));
  catalog.add(make_solid_asset("tab/b", ld::ClassLabel::table, 200, 260,
                               ld::Rgb{120, 120, 120}));
  return catalog;
}

/// The precomputed low-similarity pair from the gating analysis: disjoint
/// gray ranges of 75 and 74 levels give Eq. 1 exactly 107/256 ≈ 0.418.
inline std::pair<ld::Asset, ld::Asset> low_similarity_pair() {
  std::vector<std::uint8_t> a_grays(75);
  for (int i = 0; i < 75; ++i) a_grays[static_cast<std::size_t>(i)] =
      static_cast<std::uint8_t>(i);
  std::vector<std::uint8_t> b_grays(74);
  for (int i = 0; i < 74; ++i) b_grays[static_cast<std::size_t>(i)] =
      static_cast<std::uint8_t>(75 + i);
  return {make_asset("low/a", ld::ClassLabel::figure,
                     raster_from_grays(15, 5, a_grays)),
          make_asset("low/b", ld::ClassLabel::figure,
                     raster_from_grays(2, 37, b_grays))};
}

// ---------------------------------------------------------------------
// Independent oracles.

/// Naive Eq. 1 summation, written separately from the library.
inline double naive_similarity(const ld::GrayHistogram& s,
                               const ld::GrayHistogram& g) {
  double total = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double m = s.bins[i] > g.bins[i] ? s.bins[i] : g.bins[i];
    if (m == 0.0) {
      total += 1.0;
    } else {
      const double diff =
          s.bins[i] > g.bins[i] ? s.bins[i] - g.bins[i] : g.bins[i] - s.bins[i];
      total += 1.0 - diff / m;
    }
  }
  return total / 256.0;
}

/// Brute-force painter: the class of the topmost placement covering (x,y).
inline std::uint8_t painter_class_at(const ld::PageSpec& spec, int x, int y) {
  int best_z = -1;
  std::uint8_t code = 0;
  for (const ld::Placement& p : spec.placements) {
    if (x >= p.x && x < p.x + p.target_w && y >= p.y &&
        y < p.y + p.target_h && p.z > best_z) {
      best_z = p.z;
      code = static_cast<std::uint8_t>(p.cls);
    }
  }
  return code;
}

/// Brute-force confusion tally.
inline ld::ConfusionMatrix naive_confusion(const ld::Mask& pred,
                                           const ld::Mask& truth) {
  ld::ConfusionMatrix cm;
  for (int y = 0; y < truth.height; ++y) {
    for (int x = 0; x < truth.width; ++x) {
      ++cm.counts[truth.at(x, y)][pred.at(x, y)];
    }
  }
  return cm;
}

/// Per-class intersection over union; 1.0 when the class is absent from
/// both masks.
inline double class_iou(const ld::Mask& a, const ld::Mask& b,
                        std::uint8_t cls) {
  std::uint64_t inter = 0;
  std::uint64_t uni = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const bool in_a = a.v[i] == cls;
    const bool in_b = b.v[i] == cls;
    inter += in_a && in_b;
    uni += in_a || in_b;
  }
  return uni ? static_cast<double>(inter) / static_cast<double>(uni) : 1.0;
}

// ---------------------------------------------------------------------
// Randomized inputs.

inline ld::Mask random_mask(ld::SplitMix64& rng, int w, int h,
                            int num_classes = ld::class_count) {
  ld::Mask m(w, h);
  for (std::uint8_t& v : m.v) {
    v = static_cast<std::uint8_t>(
        rng.next_below(static_cast<std::uint64_t>(num_classes)));
  }
  return m;
}

inline ld::GrayHistogram random_histogram(ld::SplitMix64& rng,
                                          int populated_bins) {
  ld::GrayHistogram h{};
  double sum = 0.0;
  for (int i = 0; i < populated_bins; ++i) {
    const auto bin = static_cast<std::size_t>(rng.next_below(256));
    const double w = rng.next_unit() + 1e-3;
    h.bins[bin] += w;
    sum += w;
  }
  for (double& b : h.bins) b /= sum;
  return h;
}

/// Randomized annotation document in canonical order (image ids strictly
/// increasing, shape z_order non-decreasing) with coordinates that are
/// exact multiples of 0.01, so write -> read is structural identity.
inline ld::AnnotationDoc random_doc(ld::SplitMix64& rng) {
  static const char* const labels[3] = {"text", "figure", "table"};
  ld::AnnotationDoc doc;
  const int image_count = static_cast<int>(rng.next_below(4));
  int id = static_cast<int>(rng.next_below(3));
  for (int i = 0; i < image_count; ++i) {
    ld::ImageAnnotation image;
    image.id = id;
    id += 1 + static_cast<int>(rng.next_below(3));
    image.width = 8 + static_cast<int>(rng.next_below(400));
    image.height = 8 + static_cast<int>(rng.next_below(400));
    image.name = "page_" + std::to_string(image.id) +
                 (rng.next_below(4) == 0 ? "_<&\"sample\">.png" : ".png");
    const int shape_count = static_cast<int>(rng.next_below(5));
    int z = 0;
    for (int s = 0; s < shape_count; ++s) {
      ld::Shape shape;
      shape.kind = rng.next_below(4) == 0 ? ld::ShapeKind::points
                                          : ld::ShapeKind::polygon;
      shape.label = labels[rng.next_below(3)];
      shape.occluded = rng.next_below(2) == 1;
      z += static_cast<int>(rng.next_below(2));
      shape.z_order = z;
      const int vertex_count =
          shape.kind == ld::ShapeKind::polygon
              ? 3 + static_cast<int>(rng.next_below(6))
              : 1 + static_cast<int>(rng.next_below(3));
      for (int v = 0; v < vertex_count; ++v) {
        const double x =
            static_cast<double>(rng.next_below(
                static_cast<std::uint64_t>(image.width) * 100 + 1)) /
            100.0;
        const double y =
            static_cast<double>(rng.next_below(
                static_cast<std::uint64_t>(image.height) * 100 + 1)) /
            100.0;
        shape.vertices.push_back(ld::PointF{x, y});
      }
      image.shapes.push_back(std::move(shape));
    }
    doc.images.push_back(std::move(image));
  }
  return doc;
}

/// Writes a catalog with PNG assets on disk plus its manifest file;
/// returns the manifest path. Used by pipeline/CLI tests.
inline std::filesystem::path write_catalog_tree(
    const std::filesystem::path& root, const std::vector<ld::Asset>& assets) {
  std::filesystem::create_directories(root / "assets");
  std::ofstream manifest(root / "catalog.txt");
  for (std::size_t i = 0; i < assets.size(); ++i) {
    const ld::Asset& asset = assets[i];
    const std::string file = "assets/asset_" + std::to_string(i) + "_" +
                             std::string(ld::class_name(asset.cls)) + ".png";
    ld::save_png_rgb(root / file, asset.raster);
    manifest << ld::class_name(asset.cls) << ' ' << file << '\n';
  }
  return root / "catalog.txt";
}

}  // namespace support
