#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "layerdoc/catalog.hpp"
#include "layerdoc/error.hpp"
#include "layerdoc/image.hpp"
#include "layerdoc/labels.hpp"
#include "layerdoc/planner.hpp"

namespace layerdoc {

/// A rendered page: the RGB raster, its pixel-exact class mask, and the
/// spec it came from.
struct Page {
  std::int64_t page_id = 0;
  Raster raster;
  Mask mask;
  PageSpec spec;
};

namespace detail {

/// Bilinear rescale with centers aligned: destination pixel centers map
/// onto source pixel centers, edges clamped.
inline Raster rescale_bilinear(const Raster& src, int target_w, int target_h) {
  Raster dst(target_w, target_h);
  const double x_ratio = static_cast<double>(src.width) / target_w;
  const double y_ratio = static_cast<double>(src.height) / target_h;
  for (int dy = 0; dy < target_h; ++dy) {
    double fy = (dy + 0.5) * y_ratio - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(src.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, src.height - 1);
    const double ty = fy - y0;
    for (int dx = 0; dx < target_w; ++dx) {
      double fx = (dx + 0.5) * x_ratio - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(src.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, src.width - 1);
      const double tx = fx - x0;

      const Rgb p00 = src.at(x0, y0);
      const Rgb p10 = src.at(x1, y0);
      const Rgb p01 = src.at(x0, y1);
      const Rgb p11 = src.at(x1, y1);
      const auto blend = [&](std::uint8_t c00, std::uint8_t c10,
                             std::uint8_t c01, std::uint8_t c11) {
        const double top = c00 + (c10 - c00) * tx;
        const double bottom = c01 + (c11 - c01) * tx;
        const double v = top + (bottom - top) * ty;
        return static_cast<std::uint8_t>(
            std::clamp<long>(std::lround(v), 0, 255));
      };
      dst.at(dx, dy) = Rgb{blend(p00.r, p10.r, p01.r, p11.r),
                           blend(p00.g, p10.g, p01.g, p11.g),
                           blend(p00.b, p10.b, p01.b, p11.b)};
    }
  }
  return dst;
}

}  // namespace detail

/// Painter's algorithm: paste every placement in ascending z, opaquely,
/// over a white canvas. The raster gets the bilinear-rescaled asset; the
/// mask gets the placement's class code over exactly the same rectangle,
/// so later layers occlude earlier ones in both.
inline Page render(const PageSpec& spec, const Catalog& catalog) {
  if (spec.width < 1 || spec.height < 1) {
    fail(ErrorKind::render, "page dimensions must be positive");
  }
  Page page;
  page.page_id = spec.page_id;
  page.spec = spec;
  page.raster = Raster(spec.width, spec.height);  // white
  page.mask = Mask(spec.width, spec.height);      // background

  std::vector<const Placement*> order;
  order.reserve(spec.placements.size());
  for (const Placement& p : spec.placements) order.push_back(&p);
  std::stable_sort(order.begin(), order.end(),
                   [](const Placement* a, const Placement* b) {
                     return a->z < b->z;
                   });

  for (const Placement* p : order) {
    const Asset* asset = catalog.find(p->asset_id);
    if (!asset) {
      fail(ErrorKind::render, "unknown asset id \"" + p->asset_id + "\"");
    }
    if (p->target_w < 1 || p->target_h < 1 || p->x < 0 || p->y < 0 ||
        p->x + p->target_w > spec.width || p->y + p->target_h > spec.height) {
      fail(ErrorKind::render, "placement of \"" + p->asset_id +
                                  "\" is not fully contained in the page");
    }
    const Raster scaled =
        detail::rescale_bilinear(asset->raster, p->target_w, p->target_h);
    const auto code = static_cast<std::uint8_t>(p->cls);
    for (int sy = 0; sy < p->target_h; ++sy) {
      for (int sx = 0; sx < p->target_w; ++sx) {
        page.raster.at(p->x + sx, p->y + sy) = scaled.at(sx, sy);
        page.mask.at(p->x + sx, p->y + sy) = code;
      }
    }
  }
  return page;
}

/// Visualization form of a mask: background black, text green, figure red,
/// table blue.
inline Raster colorize_mask(const Mask& mask) {
  Raster out(mask.width, mask.height);
  for (std::size_t i = 0; i < mask.v.size(); ++i) {
    out.px[i] = class_color(static_cast<ClassLabel>(mask.v[i]));
  }
  return out;
}

/// One maximal 4-connected region of equal non-background class. `pixels`
/// starts with the component's topmost-leftmost pixel (row-major seed).
struct RegionComponent {
  ClassLabel cls = ClassLabel::background;
  std::vector<std::pair<int, int>> pixels;
};

/// Components plus a per-pixel component index (-1 for background), which
/// downstream boundary tracing uses as its membership test.
struct ComponentMap {
  int width = 0;
  int height = 0;
  std::vector<RegionComponent> components;
  std::vector<std::int32_t> label;  // component index per pixel, -1 = none

  std::int32_t label_at(int x, int y) const {
    return label[static_cast<std::size_t>(y) * width + x];
  }
};

/// Partitions the non-background pixels into maximal 4-connected
/// same-class components, discovered in row-major scan order.
inline ComponentMap region_components(const Mask& mask) {
  ComponentMap map;
  map.width = mask.width;
  map.height = mask.height;
  map.label.assign(mask.v.size(), -1);

  std::queue<std::pair<int, int>> frontier;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      const std::uint8_t code = mask.at(x, y);
      if (code == 0 || map.label_at(x, y) != -1) continue;

      const auto id = static_cast<std::int32_t>(map.components.size());
      RegionComponent component;
      component.cls = static_cast<ClassLabel>(code);
      map.label[static_cast<std::size_t>(y) * mask.width + x] = id;
      frontier.emplace(x, y);
      while (!frontier.empty()) {
        const auto [cx, cy] = frontier.front();
        frontier.pop();
        component.pixels.emplace_back(cx, cy);
        constexpr int dx[4] = {1, -1, 0, 0};
        constexpr int dy[4] = {0, 0, 1, -1};
        for (int d = 0; d < 4; ++d) {
          const int nx = cx + dx[d];
          const int ny = cy + dy[d];
          if (nx < 0 || ny < 0 || nx >= mask.width || ny >= mask.height) {
            continue;
          }
          if (mask.at(nx, ny) != code || map.label_at(nx, ny) != -1) continue;
          map.label[static_cast<std::size_t>(ny) * mask.width + nx] = id;
          frontier.emplace(nx, ny);
        }
      }
      map.components.push_back(std::move(component));
    }
  }
  return map;
}

}  // namespace layerdoc
