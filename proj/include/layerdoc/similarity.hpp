#pragma once

#include <algorithm>
#include <cmath>

#include "layerdoc/histogram.hpp"

namespace layerdoc {

/// Histogram similarity
///
///   f(s,g) = (1/256) * sum_i (1 - |s_i - g_i| / max(s_i, g_i))
///
/// A bin where both histograms are zero contributes 1: s_i equals g_i there,
/// and this is the only convention under which f(x,x) = 1 holds. The sum is
/// accumulated first and divided by 256 last so results are order-stable.
/// Symmetric, and always in [0,1] since |s_i - g_i| <= max(s_i, g_i).
inline double similarity(const GrayHistogram& s, const GrayHistogram& g) {
  double sum = 0.0;
  for (int i = 0; i < 256; ++i) {
    const double a = s.bins[i];
    const double b = g.bins[i];
    const double hi = std::max(a, b);
    sum += hi > 0.0 ? 1.0 - std::abs(a - b) / hi : 1.0;
  }
  return sum / 256.0;
}

}  // namespace layerdoc
