// efpred: ejection-fraction ordinal classification pipeline.
//
//   efpred generate      synthetic cohort CSV + generative truth
//   efpred run           impute, balance, select, cross-validate, rank, report
//   efpred rfe           recursive feature elimination only
//   efpred verify-paper  recompute published metric tables from their matrices
//   efpred emit-figures  plot CSVs from a saved report.json

#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "efpred/common/error.hpp"
#include "efpred/feature_select/feature_select.hpp"
#include "efpred/report/atomic_file.hpp"
#include "efpred/report/config.hpp"
#include "efpred/report/pipeline.hpp"
#include "efpred/report/verify_paper.hpp"
#include "efpred/synth/cohort.hpp"
#include "efpred/tabular/csv_io.hpp"
#include "efpred/tabular/preprocess.hpp"

namespace {

constexpr int kExitVerification = 4;

std::vector<std::size_t> parse_sizes(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const long v = std::stol(item, &used);
      if (used != item.size() || v < 1) throw std::invalid_argument(item);
      out.push_back(static_cast<std::size_t>(v));
    } catch (const std::exception&) {
      throw efpred::Error(efpred::ErrorKind::kConfig, "bad subset size '" + item + "'");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace efpred;
  CLI::App app{"Ordinal ejection-fraction classification pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  // generate
  auto* gen = app.add_subcommand("generate", "Write a synthetic cohort and its generative truth");
  std::string gen_schema = "step1";
  std::size_t gen_n = 300;
  std::uint64_t gen_seed = 1;
  double gen_missing = 0.0;
  std::optional<double> gen_noise;
  std::string gen_out;
  gen->add_option("--schema", gen_schema, "step1, step2, or a schema JSON file")->capture_default_str();
  gen->add_option("-n,--patients", gen_n, "Cohort size")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Random seed")->capture_default_str();
  gen->add_option("--missing-rate", gen_missing, "Fraction of feature cells blanked")->capture_default_str();
  gen->add_option("--noise-sd", gen_noise, "Latent noise standard deviation");
  gen->add_option("-o,--out", gen_out, "Output CSV path")->required();

  // run
  auto* run = app.add_subcommand("run", "Run the full pipeline and write a report");
  std::string run_config;
  std::optional<std::string> run_data, run_schema, run_out, run_models, run_rfe_sizes;
  std::optional<std::uint64_t> run_seed;
  std::optional<int> run_folds;
  std::optional<unsigned> run_threads;
  bool run_save = false, run_no_rfe = false;
  run->add_option("-c,--config", run_config, "JSON config file");
  run->add_option("--data", run_data, "Input CSV");
  run->add_option("--schema", run_schema, "step1, step2, or a schema JSON file");
  run->add_option("--seed", run_seed, "Top-level random seed");
  run->add_option("--folds", run_folds, "Cross-validation folds");
  run->add_option("--models", run_models, "Comma-separated model names (default parameters)");
  run->add_option("--rfe-sizes", run_rfe_sizes, "Comma-separated descending subset sizes");
  run->add_flag("--no-rfe", run_no_rfe, "Skip feature selection");
  run->add_option("--threads", run_threads, "Forest worker threads (0 = all cores)");
  run->add_flag("--save-models", run_save, "Also save models fitted on the full data");
  run->add_option("-o,--out", run_out, "Output directory");

  // rfe
  auto* rfe = app.add_subcommand("rfe", "Recursive feature elimination with a CV-RMSE curve");
  std::string rfe_data, rfe_schema = "step1", rfe_sizes, rfe_out;
  std::uint64_t rfe_seed = 42;
  int rfe_folds = 10, rfe_trees = 100;
  unsigned rfe_threads = 0;
  rfe->add_option("--data", rfe_data, "Input CSV")->required();
  rfe->add_option("--schema", rfe_schema, "step1, step2, or a schema JSON file")->capture_default_str();
  rfe->add_option("--sizes", rfe_sizes, "Comma-separated descending subset sizes")->required();
  rfe->add_option("--folds", rfe_folds, "Cross-validation folds")->capture_default_str();
  rfe->add_option("--seed", rfe_seed, "Top-level random seed")->capture_default_str();
  rfe->add_option("--n-trees", rfe_trees, "Trees per forest")->capture_default_str();
  rfe->add_option("--threads", rfe_threads, "Forest worker threads (0 = all cores)");
  rfe->add_option("-o,--out", rfe_out, "Output directory")->required();

  // verify-paper
  auto* verify = app.add_subcommand("verify-paper", "Check published metrics against their confusion matrices");
  double verify_tol = 1.0;
  verify->add_option("--tolerance", verify_tol, "Allowed deviation in percentage points")->capture_default_str();

  // emit-figures
  auto* figs = app.add_subcommand("emit-figures", "Write plot CSVs from a report.json");
  std::string figs_report, figs_out;
  figs->add_option("--report", figs_report, "report.json from a previous run")->required();
  figs->add_option("-o,--out", figs_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      auto cfg = CohortConfig::planted(FeatureSchema::resolve(gen_schema), gen_n, gen_seed);
      if (gen_noise) cfg.noise_sd = *gen_noise;
      auto cohort = generate_cohort(cfg);
      const Dataset data = inject_missing(cohort.data, gen_missing, derive_seed(gen_seed, "missing"));
      const std::filesystem::path out(gen_out);
      if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
      write_dataset(out, data);
      auto truth_path = out;
      truth_path.replace_extension(".truth.json");
      write_file_atomic(truth_path, cohort.truth.to_json().dump(2) + "\n");
      const auto& cc = cohort.truth.class_counts;
      std::cout << "wrote " << out.string() << " (" << data.rows() << " rows, classes " << cc[0]
                << '/' << cc[1] << '/' << cc[2] << ") and " << truth_path.string() << '\n';
      return 0;
    }

    if (*run) {
      PipelineConfig cfg = run_config.empty() ? PipelineConfig::with_default_models()
                                              : PipelineConfig::load(run_config);
      if (run_data) cfg.dataset = *run_data;
      if (run_schema) cfg.schema = *run_schema;
      if (run_seed) cfg.seed = *run_seed;
      if (run_folds) cfg.folds = *run_folds;
      if (run_out) cfg.output_dir = *run_out;
      if (run_threads) cfg.threads = *run_threads;
      if (run_save) cfg.save_models = true;
      if (run_rfe_sizes) cfg.rfe_sizes = parse_sizes(*run_rfe_sizes);
      if (run_no_rfe) cfg.rfe_sizes.clear();
      if (run_models) {
        cfg.models.clear();
        std::stringstream ss(*run_models);
        std::string name;
        while (std::getline(ss, name, ',')) cfg.models.push_back(default_spec(parse_model_family(name)));
      }
      const auto report = run_and_write(cfg);
      std::cout << report.summary() << "\nartifacts written to " << cfg.output_dir.string() << '\n';
      return 0;
    }

    if (*rfe) {
      const auto schema = FeatureSchema::resolve(rfe_schema);
      const auto seeds = SeedPlan::from(rfe_seed);
      const Dataset data = upsample_balance(impute_missing(load_dataset(rfe_data, schema)), seeds.balance);
      ForestParams fp;
      fp.n_trees = rfe_trees;
      fp.threads = rfe_threads;
      const auto result = run_rfe(data, parse_sizes(rfe_sizes), rfe_folds, seeds.rfe, fp);
      ArtifactSet out(rfe_out);
      out.write("rmse_curve.csv", result.curve_csv());
      out.write("rfe.json", result.to_json().dump(2) + "\n");
      out.commit();
      std::cout << result.curve_csv() << "selected (" << result.selected_size << "):";
      for (const auto& f : result.selected) std::cout << ' ' << f;
      std::cout << '\n';
      return 0;
    }

    if (*verify) {
      const auto tables = published_tables();
      const auto summary = verify_paper_tables(tables, verify_tol);
      std::cout << summary.format();
      return summary.passed ? 0 : kExitVerification;
    }

    if (*figs) {
      const auto report = RunReport::load(figs_report);
      for (const auto& p : emit_figures(report, figs_out)) std::cout << "wrote " << p.string() << '\n';
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "efpred: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "efpred: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
