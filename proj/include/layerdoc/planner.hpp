#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "layerdoc/catalog.hpp"
#include "layerdoc/config.hpp"
#include "layerdoc/error.hpp"
#include "layerdoc/rng.hpp"
#include "layerdoc/similarity.hpp"

namespace layerdoc {

/// One pasted layer: where an asset lands on the page and at what size.
/// scale_x == scale_y whenever aspect ratio is preserved (guided mode);
/// the ablation mode stretches the axes independently.
struct Placement {
  std::string asset_id;
  ClassLabel cls = ClassLabel::background;
  int x = 0;
  int y = 0;
  double scale_x = 1.0;
  double scale_y = 1.0;
  int target_w = 0;
  int target_h = 0;
  int z = 0;

  bool operator==(const Placement&) const = default;
};

/// Complete plan for one page: placements in ascending z (text first, then
/// images), plus the counters the instrumentation and audits rely on.
struct PageSpec {
  std::int64_t page_id = 0;
  int width = 0;
  int height = 0;
  std::uint64_t seed = 0;
  std::vector<Placement> placements;
  SynthConfig config;  // snapshot of the config the page was planned with
  int relaxed_count = 0;             // slots where the gate was relaxed
  std::uint64_t similarity_evals = 0;  // Eq. 1 evaluations spent on gating

  bool operator==(const PageSpec&) const = default;
};

/// Maps u in [0,1) linearly onto [scale_min, scale_max].
inline double sample_scale(double u, double scale_min, double scale_max) {
  if (!(u >= 0.0 && u < 1.0)) {
    fail(ErrorKind::domain, "sample_scale: u must be in [0,1)");
  }
  return scale_min + (scale_max - scale_min) * u;
}

/// Maps u in [0,1) onto the integer interval [lo, hi], uniformly.
inline int sample_int_in(double u, int lo, int hi) {
  if (!(u >= 0.0 && u < 1.0)) {
    fail(ErrorKind::domain, "sample_int_in: u must be in [0,1)");
  }
  return static_cast<int>(std::floor(u * (hi - lo + 1))) + lo;
}

/// Number of images to superimpose on one page.
inline int sample_image_count(double u, int count_min, int count_max) {
  return sample_int_in(u, count_min, count_max);
}

struct SelectionResult {
  std::vector<std::size_t> indices;  // into catalog.assets, slot order
  int relaxed_count = 0;
  std::uint64_t similarity_evals = 0;
};

/// Draws k figure/table assets (repetition allowed) from the catalog.
///
/// With gating on, a candidate is accepted when its Eq. 1 similarity to
/// every previously accepted asset of this page is >= tau; the first slot
/// is unconditional. A slot that burns max_attempts rejections is relaxed:
/// the best-scoring rejected candidate (largest minimum similarity) is
/// accepted and the relaxation is counted. Candidates the caller's
/// `eligible` predicate refuses (e.g. too large for the page even at
/// minimum scale) are skipped and redrawn without counting as rejections.
template <typename Eligible>
inline SelectionResult select_images(const Catalog& catalog, int k,
                                     SplitMix64& rng, double tau,
                                     int max_attempts, bool gated,
                                     Eligible&& eligible) {
  if (k < 1) fail(ErrorKind::domain, "select_images: k must be at least 1");
  if (max_attempts < 1) {
    fail(ErrorKind::domain, "select_images: max_attempts must be at least 1");
  }
  const auto& pool = catalog.image_indices;
  if (pool.empty()) {
    fail(ErrorKind::planning, "catalog has no figure/table assets");
  }
  std::size_t first_eligible = pool.size();
  for (std::size_t p = 0; p < pool.size(); ++p) {
    if (eligible(catalog.assets[pool[p]])) {
      first_eligible = p;
      break;
    }
  }
  if (first_eligible == pool.size()) {
    fail(ErrorKind::planning,
         "no figure/table asset passes the eligibility check");
  }
  // After this many consecutive ineligible draws, fall back to the first
  // eligible pool entry so a sparse pool cannot stall a page.
  const std::uint64_t skip_limit = 64 * pool.size() + 1024;

  SelectionResult out;
  out.indices.reserve(static_cast<std::size_t>(k));
  for (int slot = 0; slot < k; ++slot) {
    int rejections = 0;
    bool have_best = false;
    std::size_t best_index = 0;
    double best_score = -1.0;
    std::uint64_t skips = 0;
    for (;;) {
      std::size_t candidate;
      if (skips > skip_limit) {
        candidate = pool[first_eligible];
      } else {
        candidate = pool[rng.next_below(pool.size())];
        if (!eligible(catalog.assets[candidate])) {
          ++skips;
          continue;
        }
      }
      if (!gated || out.indices.empty()) {
        out.indices.push_back(candidate);
        break;
      }
      double min_sim = 1.0;
      for (std::size_t accepted : out.indices) {
        ++out.similarity_evals;
        min_sim = std::min(
            min_sim, similarity(catalog.assets[candidate].gray_hist,
                                catalog.assets[accepted].gray_hist));
      }
      if (min_sim >= tau) {
        out.indices.push_back(candidate);
        break;
      }
      if (!have_best || min_sim > best_score) {
        have_best = true;
        best_index = candidate;
        best_score = min_sim;
      }
      if (++rejections >= max_attempts) {
        out.indices.push_back(best_index);
        ++out.relaxed_count;
        break;
      }
    }
  }
  return out;
}

inline SelectionResult select_images(const Catalog& catalog, int k,
                                     SplitMix64& rng, double tau,
                                     int max_attempts, bool gated = true) {
  return select_images(catalog, k, rng, tau, max_attempts, gated,
                       [](const Asset&) { return true; });
}

namespace detail {

inline int scaled_extent(double scale, int extent) {
  return std::max<int>(1, static_cast<int>(std::lround(scale * extent)));
}

/// Largest scale whose rounded target extent still fits in `limit`.
/// Starts from the real-valued bound (limit + 0.5) / extent and nudges
/// down by ulps until rounding agrees, so the result is safe under
/// floating-point noise.
inline double max_feasible_scale(int extent, int limit) {
  double s = (static_cast<double>(limit) + 0.5) / extent;
  while (scaled_extent(s, extent) > limit) {
    s = std::nextafter(s, 0.0);
  }
  return s;
}

}  // namespace detail

/// Plans one page. Pure in (catalog, config, page_index): the per-page seed
/// is page_seed(master_seed, page_index) and all randomness comes from one
/// splitmix64 stream consumed in a fixed order —
///   1. text column count,
///   2. one draw per text block while the columns fill,
///   3. image count,
///   4. image selection draws (including gate redraws),
///   5. per image: scale draw(s, two in ablation mode; redrawn while the
///      scaled asset overflows the page, up to max_attempts, then clamped
///      to the largest feasible scale), then x and y position draws.
///
/// Text is pasted first (lower z), scaled to column width; images follow
/// with uniformly random fully-contained positions and unrestricted
/// overlap. With aesthetic_guidance=false the similarity gate is skipped
/// and per-axis scales are drawn independently from the widened interval.
inline PageSpec plan_page(const Catalog& catalog, const SynthConfig& config,
                          std::int64_t page_index) {
  validate_config(config);
  if (!catalog.ready_for_planning()) {
    fail(ErrorKind::planning,
         "catalog needs at least one text asset and one figure/table asset");
  }
  const int page_w = config.page_width;
  const int page_h = config.page_height;
  const bool guided = config.aesthetic_guidance;
  const double lo = guided ? config.scale_min : ablation_scale_min;
  const double hi = guided ? config.scale_max : ablation_scale_max;

  const auto fits_at_min_scale = [&](const Asset& a) {
    return detail::scaled_extent(lo, a.raster.width) <= page_w &&
           detail::scaled_extent(lo, a.raster.height) <= page_h;
  };
  bool any_fits = false;
  for (std::size_t idx : catalog.image_indices) {
    if (fits_at_min_scale(catalog.assets[idx])) {
      any_fits = true;
      break;
    }
  }
  if (!any_fits) {
    fail(ErrorKind::planning,
         "no figure/table asset fits a " + std::to_string(page_w) + "x" +
             std::to_string(page_h) + " page at minimum scale");
  }

  PageSpec spec;
  spec.page_id = page_index;
  spec.width = page_w;
  spec.height = page_h;
  spec.seed = page_seed(config.master_seed, page_index);
  spec.config = config;
  SplitMix64 rng{spec.seed};
  int z = 0;

  // Text flow: 1..N columns, each filled top to bottom until the next
  // block would overflow the page.
  const int columns = sample_int_in(rng.next_unit(), config.text_columns_min,
                                    config.text_columns_max);
  const int gutter = config.column_gutter;
  const int column_w = (page_w - (columns - 1) * gutter) / columns;
  if (column_w >= 1) {
    for (int c = 0; c < columns; ++c) {
      const int x0 = c * (column_w + gutter);
      int y = 0;
      while (y < page_h) {
        const std::size_t pick = rng.next_below(catalog.text_indices.size());
        const Asset& asset = catalog.assets[catalog.text_indices[pick]];
        const double s = static_cast<double>(column_w) / asset.raster.width;
        const int target_h = detail::scaled_extent(s, asset.raster.height);
        if (y + target_h > page_h) break;
        spec.placements.push_back(Placement{asset.id, ClassLabel::text, x0, y,
                                            s, s, column_w, target_h, z++});
        y += target_h + gutter;
      }
    }
  }

  // Image layers.
  const int k = sample_image_count(rng.next_unit(), config.count_min,
                                   config.count_max);
  SelectionResult selection =
      select_images(catalog, k, rng, config.similarity_threshold,
                    config.max_attempts, guided, fits_at_min_scale);
  spec.relaxed_count = selection.relaxed_count;
  spec.similarity_evals = selection.similarity_evals;

  for (std::size_t index : selection.indices) {
    const Asset& asset = catalog.assets[index];
    const int w = asset.raster.width;
    const int h = asset.raster.height;
    double sx = lo;
    double sy = lo;
    int target_w = 0;
    int target_h = 0;
    bool placed = false;
    for (int attempt = 0; attempt < config.max_attempts; ++attempt) {
      sx = sample_scale(rng.next_unit(), lo, hi);
      sy = guided ? sx : sample_scale(rng.next_unit(), lo, hi);
      target_w = detail::scaled_extent(sx, w);
      target_h = detail::scaled_extent(sy, h);
      if (target_w <= page_w && target_h <= page_h) {
        placed = true;
        break;
      }
    }
    if (!placed) {
      // Deterministic fallback: clamp to the largest feasible scale. The
      // eligibility check above guarantees this stays >= the minimum.
      const double cap_w = detail::max_feasible_scale(w, page_w);
      const double cap_h = detail::max_feasible_scale(h, page_h);
      if (guided) {
        sx = sy = std::min({hi, cap_w, cap_h});
      } else {
        sx = std::min(sx, cap_w);
        sy = std::min(sy, cap_h);
      }
      target_w = detail::scaled_extent(sx, w);
      target_h = detail::scaled_extent(sy, h);
    }
    const int x = static_cast<int>(
        rng.next_below(static_cast<std::uint64_t>(page_w - target_w) + 1));
    const int y = static_cast<int>(
        rng.next_below(static_cast<std::uint64_t>(page_h - target_h) + 1));
    spec.placements.push_back(
        Placement{asset.id, asset.cls, x, y, sx, sy, target_w, target_h, z++});
  }
  return spec;
}

}  // namespace layerdoc
