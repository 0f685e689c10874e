#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "support.hpp"

namespace ld = layerdoc;

namespace {

ld::Mask mask_from_rows(int w, int h,
                        const std::vector<std::vector<int>>& rows) {
  ld::Mask m(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      m.at(x, y) = static_cast<std::uint8_t>(rows[y][x]);
    }
  }
  return m;
}

ld::AnnotationDoc doc_for(int id, int w, int h, std::vector<ld::Shape> shapes,
                          const std::string& name = "page.png") {
  ld::AnnotationDoc doc;
  ld::ImageAnnotation image;
  image.id = id;
  image.name = name;
  image.width = w;
  image.height = h;
  image.shapes = std::move(shapes);
  doc.images.push_back(std::move(image));
  return doc;
}

ld::Shape polygon(const char* label,
                  const std::vector<std::pair<double, double>>& xy,
                  int z_order = 0) {
  ld::Shape s;
  s.kind = ld::ShapeKind::polygon;
  s.label = label;
  for (const auto& [x, y] : xy) s.vertices.push_back(ld::PointF{x, y});
  s.z_order = z_order;
  return s;
}

}  // namespace

TEST_CASE("a full-page region polygonizes to its four corners") {
  const ld::Mask m = ld::Mask(7, 5, 2);
  const ld::PolygonizeResult r = ld::mask_to_polygons(m, 0.0);
  CHECK(r.dropped == 0);
  REQUIRE(r.shapes.size() == 1);
  const ld::Shape& s = r.shapes[0];
  CHECK(s.kind == ld::ShapeKind::polygon);
  CHECK(s.label == "figure");
  CHECK(s.z_order == 0);
  CHECK(s.vertices == std::vector<ld::PointF>{{0, 0}, {7, 0}, {7, 5}, {0, 5}});
}

TEST_CASE("an all-background mask polygonizes to nothing") {
  const ld::PolygonizeResult r = ld::mask_to_polygons(ld::Mask(6, 6), 1.5);
  CHECK(r.shapes.empty());
  CHECK(r.dropped == 0);
}

TEST_CASE("an L-shaped region keeps its six corners at eps zero") {
  const ld::Mask m = mask_from_rows(4, 4,
                                    {{2, 2, 2, 0},
                                     {2, 0, 0, 0},
                                     {2, 0, 0, 0},
                                     {0, 0, 0, 0}});
  const ld::PolygonizeResult r = ld::mask_to_polygons(m, 0.0);
  REQUIRE(r.shapes.size() == 1);
  CHECK(r.shapes[0].vertices ==
        std::vector<ld::PointF>{{0, 0}, {3, 0}, {3, 1}, {1, 1}, {1, 3}, {0, 3}});
}

TEST_CASE("nested components get their nesting depth as z_order") {
  const ld::Mask m = mask_from_rows(5, 5,
                                    {{2, 2, 2, 2, 2},
                                     {2, 3, 3, 3, 2},
                                     {2, 3, 1, 3, 2},
                                     {2, 3, 3, 3, 2},
                                     {2, 2, 2, 2, 2}});
  const ld::PolygonizeResult r = ld::mask_to_polygons(m, 0.0);
  CHECK(r.dropped == 0);
  REQUIRE(r.shapes.size() == 3);
  CHECK(r.shapes[0].label == "figure");
  CHECK(r.shapes[0].z_order == 0);
  CHECK(r.shapes[1].label == "table");
  CHECK(r.shapes[1].z_order == 1);
  CHECK(r.shapes[2].label == "text");
  CHECK(r.shapes[2].z_order == 2);

  // Layered fill reconstructs the donut exactly: the outer polygon covers
  // the hole, the deeper polygons paint it back.
  const ld::AnnotationDoc doc = doc_for(0, 5, 5, r.shapes);
  CHECK(ld::rasterize(doc, 0) == m);
}

TEST_CASE("components simplified below three vertices are dropped") {
  // At eps 1.5 a single-pixel region degenerates to two vertices.
  const ld::Mask m = mask_from_rows(5, 5,
                                    {{2, 2, 2, 2, 2},
                                     {2, 3, 3, 3, 2},
                                     {2, 3, 1, 3, 2},
                                     {2, 3, 3, 3, 2},
                                     {2, 2, 2, 2, 2}});
  const ld::PolygonizeResult r = ld::mask_to_polygons(m, 1.5);
  CHECK(r.dropped == 1);
  REQUIRE(r.shapes.size() == 2);
  CHECK(r.shapes[0].label == "figure");
  CHECK(r.shapes[1].label == "table");
}

TEST_CASE("mask -> polygons -> mask is lossless at eps zero") {
  const ld::Catalog catalog = support::standard_catalog();
  ld::SynthConfig config;
  config.page_width = 620;
  config.page_height = 877;
  config.master_seed = 314159;

  for (std::int64_t page = 0; page < 4; ++page) {
    const ld::PageSpec spec = ld::plan_page(catalog, config, page);
    const ld::Page rendered = ld::render(spec, catalog);
    const ld::PolygonizeResult r = ld::mask_to_polygons(rendered.mask, 0.0);
    CHECK(r.dropped == 0);

    const ld::AnnotationDoc doc =
        doc_for(static_cast<int>(page), config.page_width, config.page_height,
                r.shapes);
    const ld::Mask round = ld::rasterize(doc, static_cast<int>(page));
    for (std::uint8_t cls = 0; cls < 4; ++cls) {
      CHECK(support::class_iou(round, rendered.mask, cls) == 1.0);
    }
    CHECK(round == rendered.mask);
  }
}

TEST_CASE("default simplification stays close to the true mask") {
  const ld::Catalog catalog = support::standard_catalog();
  ld::SynthConfig config;
  config.page_width = 620;
  config.page_height = 877;
  config.master_seed = 2718281;

  for (std::int64_t page = 0; page < 4; ++page) {
    const ld::Page rendered =
        ld::render(ld::plan_page(catalog, config, page), catalog);
    const ld::PolygonizeResult r =
        ld::mask_to_polygons(rendered.mask, ld::default_simplify_eps);
    const ld::AnnotationDoc doc =
        doc_for(static_cast<int>(page), config.page_width, config.page_height,
                r.shapes);
    const ld::Mask round = ld::rasterize(doc, static_cast<int>(page));
    for (std::uint8_t cls = 1; cls < 4; ++cls) {
      CHECK(support::class_iou(round, rendered.mask, cls) >= 0.95);
    }
  }
}

TEST_CASE("polygonization rejects bad arguments") {
  CHECK_THROWS_AS(ld::mask_to_polygons(ld::Mask{}, 0.0), ld::Error);
  CHECK_THROWS_AS(ld::mask_to_polygons(ld::Mask(3, 3), -1.0), ld::Error);
}

TEST_CASE("polygon fill covers exactly the pixel centers inside") {
  // Right triangle with legs of length 4: rows hold 3, 2, 1, 0 pixels.
  const ld::AnnotationDoc doc = doc_for(
      1, 5, 5, {polygon("table", {{0, 0}, {4, 0}, {0, 4}})});
  const ld::Mask m = ld::rasterize(doc, 1);
  const ld::Mask expected = mask_from_rows(5, 5,
                                           {{3, 3, 3, 0, 0},
                                            {3, 3, 0, 0, 0},
                                            {3, 0, 0, 0, 0},
                                            {0, 0, 0, 0, 0},
                                            {0, 0, 0, 0, 0}});
  CHECK(m == expected);
}

TEST_CASE("abutting polygons neither overlap nor leave gaps") {
  // Two rectangles sharing the edge x = 3 over a 6x4 image.
  const ld::AnnotationDoc doc =
      doc_for(0, 6, 4,
              {polygon("figure", {{0, 0}, {3, 0}, {3, 4}, {0, 4}}),
               polygon("table", {{3, 0}, {6, 0}, {6, 4}, {3, 4}})});
  const ld::Mask m = ld::rasterize(doc, 0);
  for (int y = 0; y < 4; ++y) {
    for (int x = 0; x < 6; ++x) {
      CHECK(m.at(x, y) == (x < 3 ? 2 : 3));
    }
  }
}

TEST_CASE("rasterization honors z_order then document order") {
  const auto base = polygon("figure", {{0, 0}, {6, 0}, {6, 6}, {0, 6}}, 0);
  const auto top = polygon("table", {{2, 2}, {5, 2}, {5, 5}, {2, 5}}, 1);

  SECTION("higher z_order wins regardless of listing order") {
    const ld::AnnotationDoc doc = doc_for(0, 6, 6, {top, base});
    const ld::Mask m = ld::rasterize(doc, 0);
    CHECK(m.at(0, 0) == 2);
    CHECK(m.at(3, 3) == 3);
  }

  SECTION("equal z_order falls back to document order") {
    auto flat_top = top;
    flat_top.z_order = 0;
    const ld::AnnotationDoc doc = doc_for(0, 6, 6, {base, flat_top});
    const ld::Mask m = ld::rasterize(doc, 0);
    CHECK(m.at(3, 3) == 3);

    const ld::AnnotationDoc reversed = doc_for(0, 6, 6, {flat_top, base});
    CHECK(ld::rasterize(reversed, 0).at(3, 3) == 2);
  }
}

TEST_CASE("points shapes mark the pixel containing each vertex") {
  ld::Shape pts;
  pts.kind = ld::ShapeKind::points;
  pts.label = "text";
  pts.vertices = {{2.7, 1.2}, {0.0, 0.0}, {5.0, 5.0}};
  const ld::AnnotationDoc doc = doc_for(0, 5, 5, {pts});
  const ld::Mask m = ld::rasterize(doc, 0);
  CHECK(m.at(2, 1) == 1);
  CHECK(m.at(0, 0) == 1);
  CHECK(m.at(4, 4) == 1);  // clamped to the last pixel
  std::size_t marked = 0;
  for (std::uint8_t v : m.v) marked += v != 0;
  CHECK(marked == 3);
}

TEST_CASE("rasterize requires a known image id") {
  const ld::AnnotationDoc doc =
      doc_for(3, 4, 4, {polygon("figure", {{0, 0}, {4, 0}, {0, 4}})});
  try {
    ld::rasterize(doc, 8);
    FAIL("expected a lookup error");
  } catch (const ld::Error& e) {
    CHECK(e.kind() == ld::ErrorKind::lookup);
  }
}

TEST_CASE("document validation enforces the structural rules") {
  const auto triangle = polygon("figure", {{0, 0}, {4, 0}, {0, 4}});

  SECTION("a well-formed document passes") {
    CHECK_NOTHROW(validate_annotation_doc(doc_for(0, 4, 4, {triangle})));
    CHECK_NOTHROW(validate_annotation_doc(ld::AnnotationDoc{}));
  }

  SECTION("only version 1.1 is supported") {
    ld::AnnotationDoc doc = doc_for(0, 4, 4, {triangle});
    doc.version = "1.0";
    try {
      validate_annotation_doc(doc);
      FAIL("expected an unsupported_version error");
    } catch (const ld::Error& e) {
      CHECK(e.kind() == ld::ErrorKind::unsupported_version);
    }
  }

  SECTION("image ids must be unique and non-negative") {
    ld::AnnotationDoc doc = doc_for(2, 4, 4, {triangle});
    doc.images.push_back(doc.images[0]);
    CHECK_THROWS_AS(validate_annotation_doc(doc), ld::Error);

    CHECK_THROWS_AS(validate_annotation_doc(doc_for(-1, 4, 4, {triangle})),
                    ld::Error);
  }

  SECTION("background is not a shape label") {
    auto bad = triangle;
    bad.label = "background";
    CHECK_THROWS_AS(validate_annotation_doc(doc_for(0, 4, 4, {bad})),
                    ld::Error);
  }

  SECTION("vertex count minimums are per shape kind") {
    auto degenerate = triangle;
    degenerate.vertices.resize(2);
    CHECK_THROWS_AS(validate_annotation_doc(doc_for(0, 4, 4, {degenerate})),
                    ld::Error);

    ld::Shape pts;
    pts.kind = ld::ShapeKind::points;
    pts.label = "text";
    CHECK_THROWS_AS(validate_annotation_doc(doc_for(0, 4, 4, {pts})),
                    ld::Error);
    pts.vertices = {{1.0, 1.0}};
    CHECK_NOTHROW(validate_annotation_doc(doc_for(0, 4, 4, {pts})));
  }

  SECTION("vertices must stay inside the image bounds") {
    const auto escaped = polygon("figure", {{-1.0, 0.0}, {4.0, 0.0}, {0.0, 5.0}});
    try {
      validate_annotation_doc(doc_for(0, 4, 4, {escaped}));
      FAIL("expected a validation error");
    } catch (const ld::Error& e) {
      CHECK(e.kind() == ld::ErrorKind::validation);
      CHECK_THAT(e.what(),
                 Catch::Matchers::ContainsSubstring("outside image bounds"));
    }
    // The check can be waived for documents that are not ours.
    CHECK_NOTHROW(validate_annotation_doc(doc_for(0, 4, 4, {escaped}), false));
  }
}
