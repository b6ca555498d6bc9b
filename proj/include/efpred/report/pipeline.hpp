#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "efpred/eval/cross_validate.hpp"
#include "efpred/eval/metrics.hpp"
#include "efpred/feature_select/feature_select.hpp"
#include "efpred/report/config.hpp"

namespace efpred {

inline constexpr std::string_view kReportFormatVersion = "efpred-report/1";
inline constexpr std::string_view kVersion = "0.1.0";

struct ModelReport {
  CvResult cv;
  MetricsTable metrics;  // from the pooled out-of-fold matrix

  friend bool operator==(const ModelReport&, const ModelReport&) = default;
};

struct ForestDiagnostics {
  std::vector<double> oob_error_curve;
  std::vector<std::size_t> node_histogram;
  ImportanceRanking importance;

  friend bool operator==(const ForestDiagnostics&, const ForestDiagnostics&) = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string config_hash;
  std::string version;
  std::string schema;
  std::size_t input_rows = 0;
  std::size_t balanced_rows = 0;
  std::array<std::size_t, kNumClasses> input_class_counts{};

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct RunReport {
  std::vector<std::string> features;  // features the models were trained on
  std::vector<ModelReport> models;    // ordered by model id
  std::vector<RankEntry> ranking;
  std::optional<RfeResult> rfe;
  std::optional<ForestDiagnostics> forest;
  Provenance provenance;

  nlohmann::json to_json() const;
  static RunReport from_json(const nlohmann::json& j);
  static RunReport load(const std::filesystem::path& path);

  /// Aligned plain-text summary.
  std::string summary() const;

  friend bool operator==(const RunReport&, const RunReport&) = default;
};

/// Random substreams derived from the top-level seed.
struct SeedPlan {
  std::uint64_t root = 0;
  std::uint64_t balance = 0;
  std::uint64_t folds = 0;
  std::uint64_t rfe = 0;
  std::uint64_t forest = 0;

  std::uint64_t model(const std::string& id) const;
  static SeedPlan from(std::uint64_t seed);
};

/// load -> impute -> balance -> (RFE) -> per-model CV -> metrics -> ranking ->
/// forest diagnostics. Stage failures are rethrown with the stage name and the
/// original error kind. Writes nothing.
RunReport run_pipeline(const PipelineConfig& cfg);

/// Same, starting from an already loaded dataset.
RunReport run_pipeline(const PipelineConfig& cfg, const Dataset& raw);

/// Writes report.json, summary.txt and the figure CSVs into cfg.output_dir.
/// On failure every file written so far is removed. Returns the written paths.
std::vector<std::filesystem::path> write_run_artifacts(const RunReport& report,
                                                       const std::filesystem::path& dir);

/// oob_error.csv, node_histogram.csv, importance.csv, and rmse_curve.csv when
/// the report carries an RFE curve. Throws ErrorKind::kEmission when forest
/// diagnostics are missing.
std::vector<std::filesystem::path> emit_figures(const RunReport& report,
                                                const std::filesystem::path& dir);

/// Full `run`: pipeline, artifacts, and (optionally) fitted models saved as
/// model_<id>.json.
RunReport run_and_write(const PipelineConfig& cfg);

}  // namespace efpred
