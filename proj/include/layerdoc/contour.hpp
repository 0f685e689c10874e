#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "layerdoc/error.hpp"

namespace layerdoc {

struct PointF {
  double x = 0.0;
  double y = 0.0;

  bool operator==(const PointF&) const = default;
};

/// Signed shoelace area; positive for the orientation produced by
/// trace_outer_boundary (region kept on the walker's right, y down).
inline double ring_signed_area(const std::vector<PointF>& ring) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const PointF& a = ring[i];
    const PointF& b = ring[(i + 1) % ring.size()];
    sum += a.x * b.y - b.x * a.y;
  }
  return 0.5 * sum;
}

struct BoundsF {
  double min_x = 0.0, min_y = 0.0, max_x = 0.0, max_y = 0.0;
};

inline BoundsF ring_bounds(const std::vector<PointF>& ring) {
  BoundsF b{ring[0].x, ring[0].y, ring[0].x, ring[0].y};
  for (const PointF& p : ring) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

/// Even-odd containment test with the half-open crossing rule (an edge
/// counts when exactly one endpoint satisfies y <= py, and its crossing
/// lies strictly right of the query point). Matches the rasterizer.
inline bool point_in_ring(double px, double py,
                          const std::vector<PointF>& ring) {
  bool inside = false;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const PointF& a = ring[i];
    const PointF& b = ring[(i + 1) % ring.size()];
    if ((a.y <= py) != (b.y <= py)) {
      const double xc = a.x + (py - a.y) * (b.x - a.x) / (b.y - a.y);
      if (px < xc) inside = !inside;
    }
  }
  return inside;
}

/// Traces the outer boundary of one region on the pixel-corner lattice.
///
/// Pixel (px,py) occupies the unit square [px,px+1]x[py,py+1]; `in(px,py)`
/// says whether a pixel belongs to the region (must be false outside the
/// grid). The seed must be the region's topmost-leftmost pixel, so its
/// top-left corner starts the walk heading +x with the region on the
/// right. Turn decisions prefer right turns, which splits pinch vertices
/// and keeps the trace consistent with 4-connected components. Returns the
/// closed ring as its corner vertices (collinear lattice steps elided),
/// first vertex not repeated at the end.
template <typename InRegion>
inline std::vector<PointF> trace_outer_boundary(InRegion&& in, int seed_x,
                                                int seed_y) {
  if (!in(seed_x, seed_y) || in(seed_x - 1, seed_y) || in(seed_x, seed_y - 1)) {
    fail(ErrorKind::shape,
         "boundary trace seed is not a topmost-leftmost region pixel");
  }
  // Directions: 0 = +x, 1 = +y, 2 = -x, 3 = -y (y grows downward).
  constexpr int step_x[4] = {1, 0, -1, 0};
  constexpr int step_y[4] = {0, 1, 0, -1};
  // Pixels flanking the crack leaving vertex (vx,vy) in direction d:
  // ahead-right lies on the region side, ahead-left on the outside.
  const auto ahead_right = [&](int vx, int vy, int d) {
    switch (d) {
      case 0: return in(vx, vy);
      case 1: return in(vx - 1, vy);
      case 2: return in(vx - 1, vy - 1);
      default: return in(vx, vy - 1);
    }
  };
  const auto ahead_left = [&](int vx, int vy, int d) {
    switch (d) {
      case 0: return in(vx, vy - 1);
      case 1: return in(vx, vy);
      case 2: return in(vx - 1, vy);
      default: return in(vx - 1, vy - 1);
    }
  };

  const int start_x = seed_x;
  const int start_y = seed_y;
  constexpr int start_dir = 0;
  std::vector<PointF> ring;
  ring.push_back(PointF{static_cast<double>(start_x),
                        static_cast<double>(start_y)});
  int vx = start_x;
  int vy = start_y;
  int dir = start_dir;
  for (;;) {
    vx += step_x[dir];
    vy += step_y[dir];
    int next_dir;
    if (!ahead_right(vx, vy, dir)) {
      next_dir = (dir + 1) % 4;  // right turn
    } else if (ahead_left(vx, vy, dir)) {
      next_dir = (dir + 3) % 4;  // left turn
    } else {
      next_dir = dir;
    }
    if (vx == start_x && vy == start_y && next_dir == start_dir) break;
    if (next_dir != dir) {
      ring.push_back(
          PointF{static_cast<double>(vx), static_cast<double>(vy)});
    }
    dir = next_dir;
  }
  return ring;
}

inline double point_segment_distance(const PointF& p, const PointF& a,
                                     const PointF& b) {
  const double abx = b.x - a.x;
  const double aby = b.y - a.y;
  const double len_sq = abx * abx + aby * aby;
  double t = 0.0;
  if (len_sq > 0.0) {
    t = ((p.x - a.x) * abx + (p.y - a.y) * aby) / len_sq;
    t = std::clamp(t, 0.0, 1.0);
  }
  const double dx = p.x - (a.x + t * abx);
  const double dy = p.y - (a.y + t * aby);
  return std::hypot(dx, dy);
}

/// Douglas-Peucker on an open polyline: keeps both endpoints and every
/// vertex whose recursive chord distance exceeds eps.
inline std::vector<PointF> douglas_peucker(const std::vector<PointF>& pts,
                                           double eps) {
  if (eps < 0.0) {
    fail(ErrorKind::domain, "douglas_peucker: eps must be non-negative");
  }
  const std::size_t n = pts.size();
  if (n <= 2) return pts;

  std::vector<char> keep(n, 0);
  keep[0] = 1;
  keep[n - 1] = 1;
  std::vector<std::pair<std::size_t, std::size_t>> spans{{0, n - 1}};
  while (!spans.empty()) {
    const auto [a, b] = spans.back();
    spans.pop_back();
    double best = -1.0;
    std::size_t best_i = a;
    for (std::size_t i = a + 1; i < b; ++i) {
      const double d = point_segment_distance(pts[i], pts[a], pts[b]);
      if (d > best) {
        best = d;
        best_i = i;
      }
    }
    if (best > eps) {
      keep[best_i] = 1;
      spans.emplace_back(a, best_i);
      spans.emplace_back(best_i, b);
    }
  }

  std::vector<PointF> out;
  for (std::size_t i = 0; i < n; ++i) {
    if (keep[i]) out.push_back(pts[i]);
  }
  return out;
}

/// Douglas-Peucker for a closed ring: splits at the vertex farthest from
/// ring[0], simplifies both halves, and rejoins without duplicating the
/// shared endpoints.
inline std::vector<PointF> simplify_ring(const std::vector<PointF>& ring,
                                         double eps) {
  if (ring.size() < 3) return ring;
  std::size_t far = 0;
  double best = 0.0;  // only a strictly distant vertex can split the ring
  for (std::size_t i = 1; i < ring.size(); ++i) {
    const double dx = ring[i].x - ring[0].x;
    const double dy = ring[i].y - ring[0].y;
    const double d = dx * dx + dy * dy;
    if (d > best) {
      best = d;
      far = i;
    }
  }
  if (far == 0) return {ring[0]};

  std::vector<PointF> first(ring.begin(), ring.begin() + far + 1);
  std::vector<PointF> second(ring.begin() + far, ring.end());
  second.push_back(ring[0]);

  const std::vector<PointF> a = douglas_peucker(first, eps);
  const std::vector<PointF> b = douglas_peucker(second, eps);
  std::vector<PointF> out = a;
  out.insert(out.end(), b.begin() + 1, b.end() - 1);
  return out;
}

}  // namespace layerdoc
