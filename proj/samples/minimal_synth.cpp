// Smallest end-to-end use of the library: build a tiny in-memory catalog,
// plan and render one page, and print where everything landed.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <layerdoc/layerdoc.hpp>

namespace ld = layerdoc;

namespace {

// A flat-colored stand-in for a real crop.
ld::Asset make_asset(const std::string& id, ld::ClassLabel cls, int w, int h,
                     ld::Rgb color) {
  ld::Asset asset;
  asset.id = id;
  asset.cls = cls;
  asset.raster = ld::Raster(w, h);
  for (ld::Rgb& px : asset.raster.px) px = color;
  asset.gray_hist = ld::gray_histogram(asset.raster);
  return asset;
}

}  // namespace

int main() {
  ld::Catalog catalog;
  catalog.add(make_asset("text-a", ld::ClassLabel::text, 400, 120,
                         ld::Rgb{40, 40, 40}));
  catalog.add(make_asset("figure-a", ld::ClassLabel::figure, 320, 240,
                         ld::Rgb{180, 90, 60}));
  catalog.add(make_asset("table-a", ld::ClassLabel::table, 300, 200,
                         ld::Rgb{60, 90, 180}));

  ld::SynthConfig config;
  config.page_width = 620;
  config.page_height = 877;
  config.master_seed = 42;

  const ld::PageSpec spec = ld::plan_page(catalog, config, 0);
  const ld::Page page = ld::render(spec, catalog);

  const std::filesystem::path out = "minimal_synth_out";
  std::filesystem::create_directories(out);
  ld::save_png_rgb(out / "page.png", page.raster);
  ld::save_png_gray(out / "mask.png", page.mask);
  ld::save_png_rgb(out / "mask_vis.png", ld::colorize_mask(page.mask));

  const ld::PolygonizeResult polygons =
      ld::mask_to_polygons(page.mask, ld::default_simplify_eps);
  ld::AnnotationDoc doc;
  doc.images.push_back(ld::ImageAnnotation{
      0, "page.png", page.raster.width, page.raster.height, polygons.shapes});
  std::ofstream xml(out / "annotations.xml");
  xml << ld::write_cvat_xml(doc);

  std::cout << "seed " << spec.seed << ": " << spec.placements.size()
            << " placements (" << polygons.shapes.size()
            << " polygons) written to " << out.string() << "/\n";
  return 0;
}
