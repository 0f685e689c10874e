#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "layerdoc/annotation.hpp"
#include "layerdoc/catalog.hpp"
#include "layerdoc/compositor.hpp"
#include "layerdoc/config.hpp"
#include "layerdoc/cvat_xml.hpp"
#include "layerdoc/error.hpp"
#include "layerdoc/io.hpp"
#include "layerdoc/manifest.hpp"
#include "layerdoc/metrics.hpp"
#include "layerdoc/planner.hpp"

namespace layerdoc {

namespace detail {

inline std::string page_stem(std::int64_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "page_%06lld",
                static_cast<long long>(index));
  return buf;
}

inline std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Pairing key for prediction/truth file names: the stem with a trailing
/// "_mask" stripped, so page_000001.png, page_000001_mask.png and a truth
/// XML image named page_000001.png all pair up.
inline std::string pairing_key(const std::string& stem) {
  constexpr const char* suffix = "_mask";
  if (stem.size() > 5 && stem.compare(stem.size() - 5, 5, suffix) == 0) {
    return stem.substr(0, stem.size() - 5);
  }
  return stem;
}

}  // namespace detail

struct SynthOptions {
  std::filesystem::path config_path;   // empty: use built-in defaults
  std::filesystem::path catalog_path;  // catalog manifest file
  std::filesystem::path out_dir;
  std::int64_t pages = 0;
  std::optional<std::uint64_t> seed;   // overrides config master_seed
  bool no_aesthetic = false;           // forces aesthetic_guidance = false
  int workers = 0;                     // <= 0: one per hardware thread
};

struct PageFailure {
  std::int64_t page_id = 0;
  std::string error;
};

struct SynthOutcome {
  DatasetManifest manifest;
  std::vector<PageFailure> failures;
};

/// Generates a dataset: plans, renders and exports every page, then writes
/// one CVAT XML covering the run plus the manifest. Pages are distributed
/// over a worker pool; output bytes are independent of worker count
/// because each page depends only on its own derived seed. A failing page
/// is isolated, recorded in failures.json, and never blocks its siblings.
inline SynthOutcome run_synth(const SynthOptions& options) {
  SynthConfig config = options.config_path.empty()
                           ? SynthConfig{}
                           : load_config(options.config_path);
  if (options.seed) config.master_seed = *options.seed;
  if (options.no_aesthetic) config.aesthetic_guidance = false;
  validate_config(config);
  if (options.pages < 0) {
    fail(ErrorKind::config, "page count must be non-negative");
  }

  const Catalog catalog = load_catalog(
      options.catalog_path.parent_path(), options.catalog_path);
  std::filesystem::create_directories(options.out_dir);

  struct PageResult {
    bool done = false;
    PageRecord record;
    ImageAnnotation image;
    std::string error;
  };
  std::vector<PageResult> results(static_cast<std::size_t>(options.pages));

  int workers = options.workers;
  if (workers <= 0) {
    workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;
  }
  workers = static_cast<int>(
      std::min<std::int64_t>(workers, std::max<std::int64_t>(options.pages,
                                                             1)));

  std::atomic<std::int64_t> next{0};
  const auto worker = [&]() {
    for (;;) {
      const std::int64_t index = next.fetch_add(1);
      if (index >= options.pages) return;
      PageResult& result = results[static_cast<std::size_t>(index)];
      try {
        const PageSpec spec = plan_page(catalog, config, index);
        const Page page = render(spec, catalog);
        const std::string stem = detail::page_stem(index);

        const std::string raster_name = stem + ".png";
        const std::string mask_name = stem + "_mask.png";
        const std::string vis_name = stem + "_mask_vis.png";
        save_png_rgb(options.out_dir / raster_name, page.raster);
        save_png_gray(options.out_dir / mask_name, page.mask);
        save_png_rgb(options.out_dir / vis_name, colorize_mask(page.mask));

        PolygonizeResult polygons =
            mask_to_polygons(page.mask, default_simplify_eps);

        ImageAnnotation image;
        image.id = static_cast<int>(index);
        image.name = raster_name;
        image.width = page.raster.width;
        image.height = page.raster.height;
        image.shapes = std::move(polygons.shapes);

        PageRecord record;
        record.page_id = index;
        record.seed = spec.seed;
        record.width = spec.width;
        record.height = spec.height;
        record.raster_path = raster_name;
        record.mask_path = mask_name;
        record.mask_vis_path = vis_name;
        record.annotation_ref =
            "annotations.xml#" + std::to_string(image.id);
        record.relaxed_count = spec.relaxed_count;
        record.similarity_evals = spec.similarity_evals;
        record.dropped_polygons = polygons.dropped;
        for (const Placement& p : spec.placements) {
          if (p.cls == ClassLabel::text) {
            ++record.text_count;
          } else {
            ++record.placement_count;
          }
        }
        for (std::uint8_t code : page.mask.v) ++record.class_pixels[code];
        record.placements = spec.placements;

        result.record = std::move(record);
        result.image = std::move(image);
        result.done = true;
      } catch (const std::exception& e) {
        result.error = e.what();
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  SynthOutcome outcome;
  outcome.manifest.tool_version = version_string;
  outcome.manifest.created_at = detail::utc_timestamp();
  outcome.manifest.config = config;

  AnnotationDoc doc;
  for (std::int64_t i = 0; i < options.pages; ++i) {
    PageResult& result = results[static_cast<std::size_t>(i)];
    if (result.done) {
      outcome.manifest.pages.push_back(std::move(result.record));
      doc.images.push_back(std::move(result.image));
    } else {
      outcome.failures.push_back(PageFailure{i, result.error});
    }
  }

  {
    const std::filesystem::path xml_path =
        options.out_dir / "annotations.xml";
    std::ofstream out(xml_path, std::ios::binary);
    if (!out) {
      fail(ErrorKind::io, "cannot write " + xml_path.string());
    }
    out << write_cvat_xml(doc);
  }
  save_manifest(options.out_dir / "manifest.json", outcome.manifest);

  if (!outcome.failures.empty()) {
    nlohmann::ordered_json j;
    j["failures"] = nlohmann::ordered_json::array();
    for (const PageFailure& f : outcome.failures) {
      j["failures"].push_back({{"page_id", f.page_id}, {"error", f.error}});
    }
    std::ofstream out(options.out_dir / "failures.json");
    out << j.dump(2) << '\n';
  }
  return outcome;
}

struct EvaluateOptions {
  std::filesystem::path pred_dir;
  std::filesystem::path truth_path;  // mask directory or CVAT XML file
  std::filesystem::path report_path;
};

struct EvaluateOutcome {
  int evaluated = 0;
  std::vector<std::string> unmatched_pred;
  std::vector<std::string> unmatched_truth;
  std::vector<std::pair<std::string, std::string>> page_errors;
  Metrics corpus;
};

namespace detail {

inline nlohmann::ordered_json metrics_to_json(const Metrics& m) {
  nlohmann::ordered_json j;
  j["accuracy"] = m.accuracy;
  for (int c = 1; c < class_count; ++c) {
    nlohmann::ordered_json entry;
    entry["precision"] = m.per_class[c].precision;
    entry["recall"] = m.per_class[c].recall;
    entry["f1"] = m.per_class[c].f1;
    j[std::string(class_name(static_cast<ClassLabel>(c)))] = entry;
  }
  j["macro_precision"] = m.macro_precision;
  j["macro_recall"] = m.macro_recall;
  j["macro_f1"] = m.macro_f1;
  return j;
}

inline std::map<std::string, std::filesystem::path> mask_files_by_key(
    const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    fail(ErrorKind::io, "not a directory: " + dir.string());
  }
  std::map<std::string, std::filesystem::path> out;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".png") {
      continue;
    }
    const std::string stem = entry.path().stem().string();
    if (stem.size() > 9 &&
        stem.compare(stem.size() - 9, 9, "_mask_vis") == 0) {
      continue;  // visualization masks are not ground truth
    }
    // A bare stem and its _mask sibling share one key; when a directory
    // holds both (a generated dataset does), the _mask file is the mask.
    const bool is_mask =
        stem.size() > 5 && stem.compare(stem.size() - 5, 5, "_mask") == 0;
    const std::string key = pairing_key(stem);
    if (is_mask || !out.count(key)) out[key] = entry.path();
  }
  return out;
}

}  // namespace detail

/// Compares predicted masks against ground truth (a directory of mask PNGs
/// or a CVAT XML rasterized per image), writes the evaluation report, and
/// returns the outcome. Pages whose masks cannot be compared (bad file,
/// dimension mismatch) are reported and skipped; pairing no pages at all
/// is an error.
inline EvaluateOutcome run_evaluate(const EvaluateOptions& options) {
  const auto pred = detail::mask_files_by_key(options.pred_dir);

  // Truth side: either rasterizable XML images or mask files.
  std::map<std::string, int> truth_ids;  // pairing key -> image id
  AnnotationDoc truth_doc;
  std::map<std::string, std::filesystem::path> truth_files;
  const bool truth_is_xml =
      std::filesystem::is_regular_file(options.truth_path);
  if (truth_is_xml) {
    std::ifstream in(options.truth_path, std::ios::binary);
    if (!in) {
      fail(ErrorKind::io, "cannot open " + options.truth_path.string());
    }
    std::string xml((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
    truth_doc = read_cvat_xml(xml).doc;
    for (const ImageAnnotation& image : truth_doc.images) {
      const std::string stem =
          std::filesystem::path(image.name).stem().string();
      truth_ids[detail::pairing_key(stem)] = image.id;
    }
  } else {
    truth_files = detail::mask_files_by_key(options.truth_path);
  }

  EvaluateOutcome outcome;
  ConfusionMatrix corpus;
  nlohmann::ordered_json pages_json = nlohmann::ordered_json::array();

  for (const auto& [key, pred_path] : pred) {
    const bool has_truth =
        truth_is_xml ? truth_ids.count(key) > 0 : truth_files.count(key) > 0;
    if (!has_truth) {
      outcome.unmatched_pred.push_back(key);
      continue;
    }
    try {
      const Mask pred_mask = load_mask_png(pred_path);
      const Mask truth_mask = truth_is_xml
                                  ? rasterize(truth_doc, truth_ids.at(key))
                                  : load_mask_png(truth_files.at(key));
      const ConfusionMatrix cm = confusion(pred_mask, truth_mask);
      corpus += cm;
      ++outcome.evaluated;
      nlohmann::ordered_json entry;
      entry["page"] = key;
      entry["metrics"] = detail::metrics_to_json(metrics(cm));
      entry["pixels"] = cm.total();
      pages_json.push_back(std::move(entry));
    } catch (const std::exception& e) {
      outcome.page_errors.emplace_back(key, e.what());
    }
  }
  if (truth_is_xml) {
    for (const auto& [key, id] : truth_ids) {
      if (!pred.count(key)) outcome.unmatched_truth.push_back(key);
    }
  } else {
    for (const auto& [key, path] : truth_files) {
      if (!pred.count(key)) outcome.unmatched_truth.push_back(key);
    }
  }
  if (outcome.evaluated == 0) {
    fail(ErrorKind::validation,
         "no prediction/truth pairs could be evaluated");
  }

  nlohmann::ordered_json report;
  report["pages"] = std::move(pages_json);
  report["corpus"] = detail::metrics_to_json(metrics(corpus));
  report["corpus"]["pixels"] = corpus.total();
  report["evaluated_pages"] = outcome.evaluated;
  report["unmatched_pred"] = outcome.unmatched_pred;
  report["unmatched_truth"] = outcome.unmatched_truth;
  report["page_errors"] = nlohmann::ordered_json::array();
  for (const auto& [key, message] : outcome.page_errors) {
    report["page_errors"].push_back({{"page", key}, {"error", message}});
  }
  std::ofstream out(options.report_path);
  if (!out) {
    fail(ErrorKind::io, "cannot write report: " + options.report_path.string());
  }
  out << report.dump(2) << '\n';

  outcome.corpus = metrics(corpus);
  return outcome;
}

/// Prints a human-readable summary of a dataset manifest.
inline void run_inspect(const std::filesystem::path& manifest_path,
                        std::ostream& out) {
  const DatasetManifest manifest = load_manifest(manifest_path);

  out << "tool_version:  " << manifest.tool_version << '\n';
  out << "created_at:    " << manifest.created_at << '\n';
  out << "pages:         " << manifest.pages.size() << '\n';

  std::array<std::uint64_t, class_count> class_pixels{};
  std::map<int, int> count_histogram;
  std::array<int, 16> scale_histogram{};  // 0.1-wide buckets from 0.0
  int relaxed_total = 0;
  std::uint64_t similarity_evals = 0;
  std::uint64_t placements_total = 0;
  for (const PageRecord& page : manifest.pages) {
    for (int c = 0; c < class_count; ++c) {
      class_pixels[c] += page.class_pixels[c];
    }
    ++count_histogram[page.placement_count];
    relaxed_total += page.relaxed_count;
    similarity_evals += page.similarity_evals;
    placements_total += page.placements.size();
    for (const Placement& p : page.placements) {
      if (p.cls == ClassLabel::text) continue;
      for (double s : {p.scale_x, p.scale_y}) {
        const int bucket =
            std::clamp(static_cast<int>(s * 10.0), 0,
                       static_cast<int>(scale_histogram.size()) - 1);
        ++scale_histogram[static_cast<std::size_t>(bucket)];
        if (p.scale_x == p.scale_y) break;  // one sample when axes agree
      }
    }
  }

  std::uint64_t total_pixels = 0;
  for (std::uint64_t c : class_pixels) total_pixels += c;
  out << "placements:    " << placements_total << '\n';
  out << "relaxed_total: " << relaxed_total << '\n';
  out << "similarity_evals: " << similarity_evals << '\n';
  out << "class pixel share:\n";
  for (int c = 0; c < class_count; ++c) {
    const double share =
        total_pixels ? static_cast<double>(class_pixels[c]) / total_pixels
                     : 0.0;
    char line[96];
    std::snprintf(line, sizeof(line), "  %-10s %12llu  (%.4f)\n",
                  class_name(static_cast<ClassLabel>(c)),
                  static_cast<unsigned long long>(class_pixels[c]), share);
    out << line;
  }
  out << "image count histogram:\n";
  for (const auto& [count, pages] : count_histogram) {
    out << "  " << count << " images: " << pages << " pages\n";
  }
  out << "image scale histogram:\n";
  for (std::size_t b = 0; b < scale_histogram.size(); ++b) {
    if (!scale_histogram[b]) continue;
    char line[64];
    std::snprintf(line, sizeof(line), "  [%.1f,%.1f): %d\n", b / 10.0,
                  (b + 1) / 10.0, scale_histogram[b]);
    out << line;
  }
}

}  // namespace layerdoc
