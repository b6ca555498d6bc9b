#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "efpred/common/error.hpp"
#include "efpred/eval/paper_tables.hpp"
#include "efpred/report/atomic_file.hpp"
#include "efpred/report/config.hpp"
#include "efpred/report/pipeline.hpp"
#include "efpred/report/verify_paper.hpp"
#include "efpred/synth/cohort.hpp"
#include "json.hpp"

using namespace efpred;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("efpred_report_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::istringstream in(slurp(p));
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

PipelineConfig small_config() {
  auto cfg = PipelineConfig::from_json(nlohmann::json::parse(R"({
    "dataset": "in-memory.csv",
    "schema": "step2",
    "seed": 5,
    "folds": 5,
    "models": {"decision_tree": {}, "knn": {"k": 3}, "random_forest": {"n_trees": 30}},
    "rfe": {"sizes": [6, 4, 2], "n_trees": 30}
  })"));
  cfg.threads = 1;
  return cfg;
}

Dataset small_cohort() {
  return generate_cohort(CohortConfig::planted(FeatureSchema::step2(), 90, 3)).data;
}

}  // namespace

TEST_CASE("config: defaults, overrides and rejects") {
  const auto cfg = small_config();
  CHECK(cfg.folds == 5);
  CHECK(cfg.models.size() == 3);
  CHECK(cfg.rfe_sizes == std::vector<std::size_t>{6, 4, 2});
  CHECK(cfg.rfe_forest.n_trees == 30);
  CHECK(std::get<KnnParams>(cfg.models[1].params).k == 3);
  CHECK(PipelineConfig::from_json(cfg.to_json()).to_json() == cfg.to_json());

  const auto defaults = PipelineConfig::from_json(nlohmann::json{{"dataset", "x.csv"}});
  CHECK(defaults.models.size() == 5);
  CHECK(defaults.seed == 42);
  CHECK(defaults.folds == 10);

  for (const char* bad : {R"({"dataset": "x", "foldz": 3})", R"({"dataset": "x", "folds": "ten"})",
                          R"({"dataset": "x", "rfe": {"size": [3]}})", R"([1, 2])"}) {
    try {
      PipelineConfig::from_json(nlohmann::json::parse(bad));
      FAIL("config accepted: " << bad);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kConfig);
    }
  }
  CHECK_THROWS_AS(PipelineConfig::from_json(nlohmann::json::parse(R"({"models": {"lasso": {}}})")), Error);
  auto no_folds = cfg;
  no_folds.folds = 1;
  CHECK_THROWS_AS(no_folds.validate(), Error);
  auto no_data = cfg;
  no_data.dataset.clear();
  CHECK_THROWS_AS(no_data.validate(), Error);
}

TEST_CASE("config hash ignores output location and threads") {
  auto a = small_config();
  auto b = a;
  b.output_dir = "/elsewhere";
  b.threads = 7;
  CHECK(a.hash() == b.hash());
  b.seed = 6;
  CHECK_FALSE(a.hash() == b.hash());
}

TEST_CASE("config file loading") {
  const auto dir = scratch("config");
  std::ofstream(dir / "run.json") << R"({"dataset": "d.csv", "seed": 9})";
  CHECK(PipelineConfig::load(dir / "run.json").seed == 9);
  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS(PipelineConfig::load(dir / "broken.json"), Error);
  CHECK_THROWS_AS(PipelineConfig::load(dir / "absent.json"), Error);
  fs::remove_all(dir);
}

TEST_CASE("pipeline report: contents, round trip and figures") {
  const auto cfg = small_config();
  const auto report = run_pipeline(cfg, small_cohort());
  REQUIRE(report.models.size() == 3);
  CHECK(report.models[0].cv.model_id == "decision_tree");
  CHECK(report.models[2].cv.model_id == "random_forest");
  CHECK(report.ranking.size() == 3);
  REQUIRE(report.rfe.has_value());
  CHECK(report.features == report.rfe->selected);
  CHECK(report.provenance.input_rows == 90);
  CHECK(report.provenance.balanced_rows % 3 == 0);
  CHECK(report.provenance.config_hash == cfg.hash());
  for (const auto& m : report.models) CHECK(m.metrics == per_class_metrics(m.cv.pooled));

  CHECK(RunReport::from_json(report.to_json()) == report);
  CHECK(report.to_json().at("format") == std::string(kReportFormatVersion));
  CHECK(run_pipeline(cfg, small_cohort()) == report);
  CHECK(report.summary().find("random_forest") != std::string::npos);

  const auto dir = scratch("figures");
  const auto files = write_run_artifacts(report, dir);
  CHECK(files.size() == 6);
  CHECK(RunReport::load(dir / "report.json") == report);

  const auto oob = lines_of(dir / "oob_error.csv");
  CHECK(oob.front() == "tree_count,error");
  CHECK(oob.size() == 31);
  const auto hist = lines_of(dir / "node_histogram.csv");
  CHECK(hist.front() == "tree_index,node_count");
  CHECK(hist.size() == 31);
  const auto imp = lines_of(dir / "importance.csv");
  CHECK(imp.front() == "feature,gini_importance");
  CHECK(imp.size() == report.features.size() + 1);
  double prev = 1e300;
  for (std::size_t i = 1; i < imp.size(); ++i) {
    const double v = std::stod(imp[i].substr(imp[i].rfind(',') + 1));
    CHECK(v <= prev);
    prev = v;
  }
  const auto curve = lines_of(dir / "rmse_curve.csv");
  CHECK(curve.size() == 4);

  // emit-figures from the saved report reproduces the same files
  const auto again = scratch("figures_again");
  emit_figures(RunReport::load(dir / "report.json"), again);
  for (const char* f : {"oob_error.csv", "node_histogram.csv", "importance.csv", "rmse_curve.csv"})
    CHECK(slurp(again / f) == slurp(dir / f));
  fs::remove_all(dir);
  fs::remove_all(again);
}

TEST_CASE("pipeline errors carry their stage") {
  auto cfg = small_config();
  cfg.folds = 200;
  try {
    run_pipeline(cfg, small_cohort());
    FAIL("impossible folds accepted");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("stage") != std::string::npos);
  }
}

TEST_CASE("a failed emission leaves no partial artifacts") {
  auto report = run_pipeline(small_config(), small_cohort());
  report.forest.reset();
  const auto dir = scratch("partial");
  try {
    write_run_artifacts(report, dir);
    FAIL("emission without diagnostics succeeded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kEmission);
  }
  CHECK(fs::is_empty(dir));
  fs::remove_all(dir);
}

TEST_CASE("atomic writes") {
  const auto dir = scratch("atomic");
  write_file_atomic(dir / "a.txt", "first");
  write_file_atomic(dir / "a.txt", "second");
  CHECK(slurp(dir / "a.txt") == "second");
  CHECK_FALSE(fs::exists(dir / "a.txt.tmp"));
  {
    ArtifactSet set(dir);
    set.write("b.txt", "x");
    set.write("c.txt", "y");
    CHECK(fs::exists(dir / "b.txt"));
  }
  CHECK_FALSE(fs::exists(dir / "b.txt"));
  CHECK_FALSE(fs::exists(dir / "c.txt"));
  {
    ArtifactSet set(dir);
    set.write("d.txt", "z");
    set.commit();
  }
  CHECK(fs::exists(dir / "d.txt"));
  fs::remove_all(dir);
}

TEST_CASE("reference tables: clean fixtures pass, a corrupted cell is caught") {
  auto tables = published_tables();
  std::vector<PublishedTable> upright;
  for (const auto& t : tables)
    if (!t.transpose) upright.push_back(t);
  const auto clean = verify_paper_tables(upright);
  CHECK(clean.passed);
  CHECK(clean.failures() == 0);

  auto corrupted = upright;
  corrupted[1].per_class_pct[2][0] += 5;
  const auto bad = verify_paper_tables(corrupted);
  CHECK_FALSE(bad.passed);
  CHECK(bad.failures() == 1);
  CHECK(bad.format().find("FAIL") != std::string::npos);

  auto acc = upright;
  acc[0].printed = ConfusionMatrix(ConfusionMatrix::Counts{{{20, 10, 12}, {5, 26, 11}, {8, 7, 27}}});
  CHECK_FALSE(verify_paper_tables(acc).passed);
}

TEST_CASE("pipeline: five default models at k=10, and a tiny k=2 run") {
  auto cfg = PipelineConfig::with_default_models();
  cfg.dataset = "in-memory.csv";
  cfg.seed = 77;
  const auto full = run_pipeline(cfg, generate_cohort(CohortConfig::planted(FeatureSchema::step1(), 300, 77)).data);
  CHECK(full.models.size() == 5);
  CHECK(full.ranking.size() == 5);
  CHECK_FALSE(full.rfe.has_value());
  for (const auto& m : full.models) {
    CHECK(m.cv.fold_accuracies.size() == 10);
    CHECK(m.cv.mean_accuracy >= 1.0 / 3.0);
    CHECK(m.cv.mean_accuracy <= 1.0);
  }
  CHECK(full.forest->oob_error_curve.size() == 500);

  auto tiny = cfg;
  tiny.folds = 2;
  const auto small = run_pipeline(tiny, generate_cohort(CohortConfig::planted(FeatureSchema::step1(), 30, 78)).data);
  CHECK(small.models.size() == 5);
  for (const auto& m : small.models) CHECK(m.cv.fold_accuracies.size() == 2);
}
