#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

namespace ld = layerdoc;

namespace {

ld::Mask mask_of(int w, int h, const std::vector<int>& codes) {
  ld::Mask m(w, h);
  for (std::size_t i = 0; i < codes.size(); ++i) {
    m.v[i] = static_cast<std::uint8_t>(codes[i]);
  }
  return m;
}

}  // namespace

TEST_CASE("a perfect prediction scores 1.0 everywhere it has support") {
  ld::SplitMix64 rng{1};
  const ld::Mask truth = support::random_mask(rng, 16, 16);
  const ld::ConfusionMatrix cm = ld::confusion(truth, truth);
  CHECK(cm.total() == 256);

  const ld::Metrics m = ld::metrics(cm);
  CHECK(m.accuracy == 1.0);
  for (int c = 0; c < 4; ++c) {
    CHECK(m.per_class[c].precision == 1.0);
    CHECK(m.per_class[c].recall == 1.0);
    CHECK(m.per_class[c].f1 == 1.0);
  }
  CHECK(m.macro_f1 == 1.0);
}

TEST_CASE("the worked confusion example reproduces its scores") {
  // 2x2 page: truth has one text pixel and three figure pixels; the
  // prediction calls two of the figures text.
  const ld::Mask truth = mask_of(2, 2, {1, 2, 2, 2});
  const ld::Mask pred = mask_of(2, 2, {1, 1, 2, 2});
  const ld::ConfusionMatrix cm = ld::confusion(pred, truth);
  CHECK(cm.counts[1][1] == 1);
  CHECK(cm.counts[2][1] == 1);
  CHECK(cm.counts[2][2] == 2);

  const ld::Metrics m = ld::metrics(cm);
  CHECK_THAT(m.accuracy, Catch::Matchers::WithinAbs(0.75, 1e-12));
  // text: precision 1/2, recall 1/1.
  CHECK_THAT(m.per_class[1].precision, Catch::Matchers::WithinAbs(0.5, 1e-12));
  CHECK(m.per_class[1].recall == 1.0);
  CHECK_THAT(m.per_class[1].f1,
             Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
  // figure: precision 2/2, recall 2/3.
  CHECK(m.per_class[2].precision == 1.0);
  CHECK_THAT(m.per_class[2].recall,
             Catch::Matchers::WithinAbs(2.0 / 3.0, 1e-12));
  CHECK_THAT(m.per_class[2].f1, Catch::Matchers::WithinAbs(0.8, 1e-12));
  // table has no support on either side.
  CHECK(m.per_class[3].precision == 0.0);
  CHECK(m.per_class[3].recall == 0.0);
  CHECK(m.per_class[3].f1 == 0.0);
  // Macro over text / figure / table.
  CHECK_THAT(m.macro_precision,
             Catch::Matchers::WithinAbs((0.5 + 1.0 + 0.0) / 3.0, 1e-12));
  CHECK_THAT(m.macro_recall,
             Catch::Matchers::WithinAbs((1.0 + 2.0 / 3.0 + 0.0) / 3.0, 1e-12));
  CHECK_THAT(m.macro_f1,
             Catch::Matchers::WithinAbs((2.0 / 3.0 + 0.8 + 0.0) / 3.0, 1e-12));
}

TEST_CASE("the documented text example: precision 0.75, recall 1.0") {
  // Four truth-text pixels all predicted text, plus one background pixel
  // wrongly predicted text: P = 3/4 variant with clean numbers.
  ld::ConfusionMatrix cm;
  cm.counts[1][1] = 3;  // text hit
  cm.counts[0][1] = 1;  // false text
  cm.counts[0][0] = 0;
  cm.counts[2][2] = 4;  // some figure mass so accuracy is meaningful
  const ld::Metrics m = ld::metrics(cm);
  CHECK_THAT(m.per_class[1].precision, Catch::Matchers::WithinAbs(0.75, 1e-12));
  CHECK(m.per_class[1].recall == 1.0);
  CHECK_THAT(m.per_class[1].f1, Catch::Matchers::WithinAbs(6.0 / 7.0, 1e-12));
  CHECK_THAT(m.accuracy, Catch::Matchers::WithinAbs(7.0 / 8.0, 1e-12));
}

TEST_CASE("an all-background pair is perfectly accurate with zero macro") {
  const ld::Mask blank(8, 8);
  const ld::Metrics m = ld::metrics(ld::confusion(blank, blank));
  CHECK(m.accuracy == 1.0);
  CHECK(m.per_class[0].precision == 1.0);
  CHECK(m.macro_precision == 0.0);
  CHECK(m.macro_recall == 0.0);
  CHECK(m.macro_f1 == 0.0);
}

TEST_CASE("confusion matches the brute-force tally on random masks") {
  ld::SplitMix64 rng{77};
  for (int trial = 0; trial < 100; ++trial) {
    const int w = 1 + static_cast<int>(rng.next_below(24));
    const int h = 1 + static_cast<int>(rng.next_below(24));
    const ld::Mask truth = support::random_mask(rng, w, h);
    const ld::Mask pred = support::random_mask(rng, w, h);
    CHECK(ld::confusion(pred, truth) == support::naive_confusion(pred, truth));
  }
}

TEST_CASE("confusion is exhaustively correct on two-class 2x2 masks") {
  // All 3^4 x 3^4 = 6561 combinations of {background, text, figure} masks.
  for (int t = 0; t < 81; ++t) {
    for (int p = 0; p < 81; ++p) {
      ld::Mask truth(2, 2);
      ld::Mask pred(2, 2);
      int tv = t;
      int pv = p;
      for (int i = 0; i < 4; ++i) {
        truth.v[static_cast<std::size_t>(i)] =
            static_cast<std::uint8_t>(tv % 3);
        pred.v[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(pv % 3);
        tv /= 3;
        pv /= 3;
      }
      const ld::ConfusionMatrix cm = ld::confusion(pred, truth);
      REQUIRE(cm == support::naive_confusion(pred, truth));
      REQUIRE(cm.total() == 4);
    }
  }
}

TEST_CASE("confusion matrices accumulate") {
  ld::SplitMix64 rng{5};
  const ld::Mask a_truth = support::random_mask(rng, 9, 9);
  const ld::Mask a_pred = support::random_mask(rng, 9, 9);
  const ld::Mask b_truth = support::random_mask(rng, 5, 13);
  const ld::Mask b_pred = support::random_mask(rng, 5, 13);

  ld::ConfusionMatrix sum = ld::confusion(a_pred, a_truth);
  sum += ld::confusion(b_pred, b_truth);
  CHECK(sum.total() == 81 + 65);

  // Same tally as concatenating the pages into one mask.
  ld::Mask cat_truth(1, 81 + 65);
  ld::Mask cat_pred(1, 81 + 65);
  std::copy(a_truth.v.begin(), a_truth.v.end(), cat_truth.v.begin());
  std::copy(b_truth.v.begin(), b_truth.v.end(), cat_truth.v.begin() + 81);
  std::copy(a_pred.v.begin(), a_pred.v.end(), cat_pred.v.begin());
  std::copy(b_pred.v.begin(), b_pred.v.end(), cat_pred.v.begin() + 81);
  CHECK(sum == ld::confusion(cat_pred, cat_truth));
}

TEST_CASE("metric formulas agree with direct recomputation") {
  ld::SplitMix64 rng{31337};
  for (int trial = 0; trial < 50; ++trial) {
    ld::ConfusionMatrix cm;
    for (int t = 0; t < 4; ++t) {
      for (int p = 0; p < 4; ++p) {
        cm.counts[t][p] = rng.next_below(20);
      }
    }
    if (cm.total() == 0) continue;
    const ld::Metrics m = ld::metrics(cm);

    double diag = 0.0;
    for (int c = 0; c < 4; ++c) diag += static_cast<double>(cm.counts[c][c]);
    CHECK_THAT(m.accuracy,
               Catch::Matchers::WithinAbs(
                   diag / static_cast<double>(cm.total()), 1e-12));

    double macro_f1 = 0.0;
    for (int c = 1; c < 4; ++c) {
      double col = 0.0;
      double row = 0.0;
      for (int o = 0; o < 4; ++o) {
        col += static_cast<double>(cm.counts[o][c]);
        row += static_cast<double>(cm.counts[c][o]);
      }
      const double hit = static_cast<double>(cm.counts[c][c]);
      const double precision = col > 0.0 ? hit / col : 0.0;
      const double recall = row > 0.0 ? hit / row : 0.0;
      CHECK_THAT(m.per_class[c].precision,
                 Catch::Matchers::WithinAbs(precision, 1e-12));
      CHECK_THAT(m.per_class[c].recall,
                 Catch::Matchers::WithinAbs(recall, 1e-12));
      macro_f1 += (precision + recall > 0.0
                       ? 2.0 * precision * recall / (precision + recall)
                       : 0.0) /
                  3.0;
    }
    CHECK_THAT(m.macro_f1, Catch::Matchers::WithinAbs(macro_f1, 1e-12));
  }
}

TEST_CASE("confusion rejects mismatched or out-of-range masks") {
  try {
    ld::confusion(ld::Mask(3, 4), ld::Mask(4, 3));
    FAIL("expected a shape error");
  } catch (const ld::Error& e) {
    CHECK(e.kind() == ld::ErrorKind::shape);
    CHECK_THAT(e.what(),
               Catch::Matchers::ContainsSubstring("3x4"));
    CHECK_THAT(e.what(),
               Catch::Matchers::ContainsSubstring("4x3"));
  }

  ld::Mask bad(2, 2);
  bad.v[0] = 9;
  try {
    ld::confusion(bad, ld::Mask(2, 2));
    FAIL("expected a validation error");
  } catch (const ld::Error& e) {
    CHECK(e.kind() == ld::ErrorKind::validation);
  }
}

TEST_CASE("metrics on an empty tally is a domain error") {
  try {
    ld::metrics(ld::ConfusionMatrix{});
    FAIL("expected a domain error");
  } catch (const ld::Error& e) {
    CHECK(e.kind() == ld::ErrorKind::domain);
  }
}
