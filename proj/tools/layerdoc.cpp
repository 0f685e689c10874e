// layerdoc command-line tool: synthesize document-layout datasets,
// evaluate predicted masks, and inspect run manifests.

#include <cstdlib>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include <layerdoc/layerdoc.hpp>

namespace {

int parse_workers_env() {
  const char* raw = std::getenv("LAYERDOC_WORKERS");
  if (!raw) return 0;
  try {
    const int value = std::stoi(raw);
    return value > 0 ? value : 0;
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring non-numeric LAYERDOC_WORKERS=\"" << raw
              << "\"\n";
    return 0;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aesthetic-guided document-layout synthesizer"};
  app.set_version_flag("--version", layerdoc::version_string);
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand(
      "synth", "Generate pages, masks, CVAT XML and a manifest");
  layerdoc::SynthOptions synth_options;
  std::optional<std::uint64_t> seed;
  int workers_flag = 0;
  synth->add_option("--config", synth_options.config_path,
                    "Config JSON (defaults used when omitted)");
  synth
      ->add_option("--catalog", synth_options.catalog_path,
                   "Catalog manifest; asset paths resolve next to it")
      ->required();
  synth->add_option("--out", synth_options.out_dir, "Output directory")
      ->required();
  synth->add_option("--pages", synth_options.pages, "Number of pages")
      ->required();
  synth->add_option("--seed", seed, "Master seed (overrides config)");
  synth->add_flag("--no-aesthetic", synth_options.no_aesthetic,
                  "Disable similarity gating and aspect preservation");
  synth->add_option("--workers", workers_flag,
                    "Worker threads (default: LAYERDOC_WORKERS or all cores)");

  // evaluate
  auto* evaluate = app.add_subcommand(
      "evaluate", "Score predicted masks against ground truth");
  layerdoc::EvaluateOptions eval_options;
  evaluate
      ->add_option("--pred", eval_options.pred_dir,
                   "Directory of predicted class-mask PNGs")
      ->required();
  evaluate
      ->add_option("--truth", eval_options.truth_path,
                   "Truth mask directory or CVAT XML file")
      ->required();
  evaluate
      ->add_option("--report", eval_options.report_path,
                   "Where to write the JSON report")
      ->required();

  // inspect
  auto* inspect = app.add_subcommand("inspect", "Summarize a run manifest");
  std::string manifest_path;
  inspect->add_option("--manifest", manifest_path, "manifest.json path")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) {
      synth_options.seed = seed;
      synth_options.workers =
          workers_flag > 0 ? workers_flag : parse_workers_env();
      const layerdoc::SynthOutcome outcome = layerdoc::run_synth(synth_options);
      std::cout << "generated " << outcome.manifest.pages.size()
                << " page(s) into " << synth_options.out_dir.string() << "\n";
      if (!outcome.failures.empty()) {
        std::cerr << outcome.failures.size()
                  << " page(s) failed; see failures.json\n";
        for (const layerdoc::PageFailure& f : outcome.failures) {
          std::cerr << "  page " << f.page_id << ": " << f.error << "\n";
        }
        return 1;
      }
      return 0;
    }
    if (evaluate->parsed()) {
      const layerdoc::EvaluateOutcome outcome =
          layerdoc::run_evaluate(eval_options);
      std::cout << "evaluated " << outcome.evaluated << " page pair(s); "
                << "corpus accuracy " << outcome.corpus.accuracy << "\n";
      if (!outcome.unmatched_pred.empty() ||
          !outcome.unmatched_truth.empty()) {
        std::cerr << outcome.unmatched_pred.size()
                  << " prediction(s) and " << outcome.unmatched_truth.size()
                  << " truth page(s) had no counterpart\n";
      }
      for (const auto& [page, error] : outcome.page_errors) {
        std::cerr << "  page " << page << ": " << error << "\n";
      }
      return 0;
    }
    layerdoc::run_inspect(manifest_path, std::cout);
    return 0;
  } catch (const layerdoc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
}
