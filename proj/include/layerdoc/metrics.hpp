#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "layerdoc/error.hpp"
#include "layerdoc/image.hpp"
#include "layerdoc/labels.hpp"

namespace layerdoc {

/// counts[t][p] = pixels whose true class is t and predicted class is p.
struct ConfusionMatrix {
  std::array<std::array<std::uint64_t, class_count>, class_count> counts{};

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (const auto& row : counts) {
      for (std::uint64_t c : row) sum += c;
    }
    return sum;
  }

  ConfusionMatrix& operator+=(const ConfusionMatrix& other) {
    for (int t = 0; t < class_count; ++t) {
      for (int p = 0; p < class_count; ++p) {
        counts[t][p] += other.counts[t][p];
      }
    }
    return *this;
  }

  bool operator==(const ConfusionMatrix&) const = default;
};

/// Exact per-pixel tally of predicted vs true classes.
inline ConfusionMatrix confusion(const Mask& pred, const Mask& truth) {
  if (pred.width != truth.width || pred.height != truth.height) {
    fail(ErrorKind::shape,
         "mask dimensions differ: predicted " + std::to_string(pred.width) +
             "x" + std::to_string(pred.height) + " vs truth " +
             std::to_string(truth.width) + "x" + std::to_string(truth.height));
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < truth.v.size(); ++i) {
    const std::uint8_t t = truth.v[i];
    const std::uint8_t p = pred.v[i];
    if (t >= class_count || p >= class_count) {
      fail(ErrorKind::validation, "mask contains a class code above 3");
    }
    ++cm.counts[t][p];
  }
  return cm;
}

struct ClassScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  bool operator==(const ClassScore&) const = default;
};

/// Pixel-level segmentation scores. Macro values average the three
/// foreground classes (text, figure, table) with equal weight; background
/// counts toward accuracy only. Zero-support classes score 0.
struct Metrics {
  double accuracy = 0.0;
  std::array<ClassScore, class_count> per_class{};  // indexed by class code
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;

  bool operator==(const Metrics&) const = default;
};

inline Metrics metrics(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) {
    fail(ErrorKind::domain, "metrics: confusion matrix is empty");
  }

  Metrics m;
  std::uint64_t diagonal = 0;
  for (int c = 0; c < class_count; ++c) {
    diagonal += cm.counts[c][c];
    std::uint64_t pred_total = 0;   // column sum: pixels predicted as c
    std::uint64_t truth_total = 0;  // row sum: pixels truly c
    for (int other = 0; other < class_count; ++other) {
      pred_total += cm.counts[other][c];
      truth_total += cm.counts[c][other];
    }
    ClassScore& score = m.per_class[c];
    const auto hit = static_cast<double>(cm.counts[c][c]);
    score.precision = pred_total > 0 ? hit / pred_total : 0.0;
    score.recall = truth_total > 0 ? hit / truth_total : 0.0;
    score.f1 = score.precision + score.recall > 0.0
                   ? 2.0 * score.precision * score.recall /
                         (score.precision + score.recall)
                   : 0.0;
  }
  m.accuracy = static_cast<double>(diagonal) / total;

  constexpr int foreground = class_count - 1;
  for (int c = 1; c < class_count; ++c) {
    m.macro_precision += m.per_class[c].precision / foreground;
    m.macro_recall += m.per_class[c].recall / foreground;
    m.macro_f1 += m.per_class[c].f1 / foreground;
  }
  return m;
}

}  // namespace layerdoc
