#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "layerdoc/compositor.hpp"
#include "layerdoc/contour.hpp"
#include "layerdoc/error.hpp"
#include "layerdoc/image.hpp"
#include "layerdoc/labels.hpp"

namespace layerdoc {

enum class ShapeKind { polygon, points };

struct Shape {
  ShapeKind kind = ShapeKind::polygon;
  std::string label;
  std::vector<PointF> vertices;
  int z_order = 0;
  bool occluded = false;

  bool operator==(const Shape&) const = default;
};

struct ImageAnnotation {
  int id = 0;
  std::string name;
  int width = 0;
  int height = 0;
  std::vector<Shape> shapes;

  bool operator==(const ImageAnnotation&) const = default;
};

struct AnnotationDoc {
  std::string version = "1.1";  // the only supported format version
  std::vector<ImageAnnotation> images;

  bool operator==(const AnnotationDoc&) const = default;
};

/// Checks the structural invariants a document must satisfy before it can
/// be serialized or rasterized: supported version, unique non-negative
/// image ids, known labels, vertex counts and (optionally) vertex bounds.
inline void validate_annotation_doc(const AnnotationDoc& doc,
                                    bool check_bounds = true) {
  if (doc.version != "1.1") {
    fail(ErrorKind::unsupported_version,
         "unsupported annotation version \"" + doc.version +
             "\" (expected \"1.1\")");
  }
  std::vector<int> ids;
  for (const ImageAnnotation& image : doc.images) {
    if (image.id < 0) {
      fail(ErrorKind::validation, "image \"" + image.name +
                                      "\" has negative id " +
                                      std::to_string(image.id));
    }
    ids.push_back(image.id);
    for (std::size_t s = 0; s < image.shapes.size(); ++s) {
      const Shape& shape = image.shapes[s];
      const ClassLabel cls = class_from_name(shape.label);
      if (cls == ClassLabel::background) {
        fail(ErrorKind::validation,
             "shapes cannot be labeled \"" + shape.label + "\"");
      }
      const std::size_t min_vertices =
          shape.kind == ShapeKind::polygon ? 3 : 1;
      if (shape.vertices.size() < min_vertices) {
        fail(ErrorKind::validation,
             "image " + std::to_string(image.id) + " shape " +
                 std::to_string(s) + " needs at least " +
                 std::to_string(min_vertices) + " vertices");
      }
      if (check_bounds) {
        for (const PointF& v : shape.vertices) {
          if (v.x < 0.0 || v.y < 0.0 || v.x > image.width ||
              v.y > image.height) {
            fail(ErrorKind::validation,
                 "image " + std::to_string(image.id) + " (\"" + image.name +
                     "\") shape " + std::to_string(s) +
                     " has vertex outside image bounds");
          }
        }
      }
    }
  }
  std::sort(ids.begin(), ids.end());
  if (std::adjacent_find(ids.begin(), ids.end()) != ids.end()) {
    fail(ErrorKind::validation, "duplicate image id in annotation document");
  }
}

/// Default Douglas-Peucker tolerance for exports; 0 disables simplification.
inline constexpr double default_simplify_eps = 1.5;

struct PolygonizeResult {
  std::vector<Shape> shapes;  // ascending z_order
  int dropped = 0;            // components whose simplified ring degenerated
};

/// Converts a class mask into polygon shapes: one polygon per 4-connected
/// region component, tracing the outer boundary on the pixel-corner
/// lattice and simplifying with Douglas-Peucker. CVAT polygons carry no
/// hole rings, so a component fully enclosed by another gets z_order equal
/// to its nesting depth; filling in ascending z_order reconstructs the
/// mask. Components reduced below 3 vertices are dropped and counted.
inline PolygonizeResult mask_to_polygons(const Mask& mask,
                                         double simplify_eps) {
  if (mask.empty()) fail(ErrorKind::domain, "mask_to_polygons: empty mask");
  if (simplify_eps < 0.0) {
    fail(ErrorKind::domain, "mask_to_polygons: simplify_eps must be >= 0");
  }
  const ComponentMap map = region_components(mask);
  const std::size_t n = map.components.size();

  std::vector<std::vector<PointF>> rings(n);
  std::vector<BoundsF> bounds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [sx, sy] = map.components[i].pixels.front();
    const auto id = static_cast<std::int32_t>(i);
    rings[i] = trace_outer_boundary(
        [&](int px, int py) {
          return px >= 0 && py >= 0 && px < map.width && py < map.height &&
                 map.label_at(px, py) == id;
        },
        sx, sy);
    bounds[i] = ring_bounds(rings[i]);
  }

  // Nesting depth: how many other components' unsimplified outer rings
  // contain this component's seed pixel center.
  std::vector<int> depth(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto [sx, sy] = map.components[i].pixels.front();
    const double cx = sx + 0.5;
    const double cy = sy + 0.5;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const BoundsF& b = bounds[j];
      if (cx < b.min_x || cx > b.max_x || cy < b.min_y || cy > b.max_y) {
        continue;
      }
      if (point_in_ring(cx, cy, rings[j])) ++depth[i];
    }
  }

  PolygonizeResult result;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<PointF> simplified = simplify_ring(rings[i], simplify_eps);
    if (simplified.size() < 3) {
      ++result.dropped;
      continue;
    }
    Shape shape;
    shape.kind = ShapeKind::polygon;
    shape.label = std::string(class_name(map.components[i].cls));
    shape.vertices = std::move(simplified);
    shape.z_order = depth[i];
    result.shapes.push_back(std::move(shape));
  }
  std::stable_sort(result.shapes.begin(), result.shapes.end(),
                   [](const Shape& a, const Shape& b) {
                     return a.z_order < b.z_order;
                   });
  return result;
}

namespace detail {

/// Even-odd scanline fill sampling pixel centers: pixel (i,j) is painted
/// when its center (i+0.5, j+0.5) lies inside the polygon, with half-open
/// spans so abutting polygons neither overlap nor leave gaps.
inline void fill_polygon(Mask& mask, const std::vector<PointF>& ring,
                         std::uint8_t code) {
  const BoundsF b = ring_bounds(ring);
  const int row_begin = std::max(0, static_cast<int>(std::ceil(b.min_y - 0.5)));
  const int row_end =
      std::min(mask.height - 1, static_cast<int>(std::floor(b.max_y - 0.5)));
  std::vector<double> crossings;
  for (int j = row_begin; j <= row_end; ++j) {
    const double yc = j + 0.5;
    crossings.clear();
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const PointF& a = ring[i];
      const PointF& c = ring[(i + 1) % ring.size()];
      if ((a.y <= yc) != (c.y <= yc)) {
        crossings.push_back(a.x + (yc - a.y) * (c.x - a.x) / (c.y - a.y));
      }
    }
    std::sort(crossings.begin(), crossings.end());
    for (std::size_t s = 0; s + 1 < crossings.size(); s += 2) {
      const int from =
          std::max(0, static_cast<int>(std::ceil(crossings[s] - 0.5)));
      const int to = std::min(
          mask.width,
          static_cast<int>(std::ceil(crossings[s + 1] - 0.5)));
      for (int x = from; x < to; ++x) mask.at(x, j) = code;
    }
  }
}

}  // namespace detail

/// Rasterizes one image's shapes back into a class mask: background
/// everywhere, then shapes filled in ascending z_order (document order
/// breaking ties), later fills overwriting earlier ones. Points shapes
/// mark the single pixel containing each vertex.
inline Mask rasterize(const AnnotationDoc& doc, int image_id) {
  const ImageAnnotation* image = nullptr;
  for (const ImageAnnotation& candidate : doc.images) {
    if (candidate.id == image_id) {
      image = &candidate;
      break;
    }
  }
  if (!image) {
    fail(ErrorKind::lookup,
         "no image with id " + std::to_string(image_id) + " in document");
  }
  if (image->width < 1 || image->height < 1) {
    fail(ErrorKind::validation,
         "image " + std::to_string(image_id) + " has empty dimensions");
  }

  std::vector<const Shape*> order;
  order.reserve(image->shapes.size());
  for (const Shape& s : image->shapes) order.push_back(&s);
  std::stable_sort(order.begin(), order.end(),
                   [](const Shape* a, const Shape* b) {
                     return a->z_order < b->z_order;
                   });

  Mask mask(image->width, image->height);
  for (const Shape* shape : order) {
    const auto code = static_cast<std::uint8_t>(class_from_name(shape->label));
    if (shape->kind == ShapeKind::polygon) {
      detail::fill_polygon(mask, shape->vertices, code);
    } else {
      for (const PointF& v : shape->vertices) {
        const int px = std::clamp(static_cast<int>(std::floor(v.x)), 0,
                                  mask.width - 1);
        const int py = std::clamp(static_cast<int>(std::floor(v.y)), 0,
                                  mask.height - 1);
        mask.at(px, py) = code;
      }
    }
  }
  return mask;
}

}  // namespace layerdoc
