#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "efpred/learners/forest.hpp"
#include "efpred/learners/model.hpp"

namespace efpred {

/// Everything a `run` needs. Loaded from a JSON config file; CLI flags
/// override individual fields.
struct PipelineConfig {
  std::filesystem::path dataset;
  std::string schema = "step1";
  std::uint64_t seed = 42;
  int folds = 10;
  /// Ordered by model id when run; ids must be unique.
  std::vector<ModelSpec> models;
  /// Empty disables feature selection.
  std::vector<std::size_t> rfe_sizes;
  ForestParams rfe_forest{100, std::nullopt, 1, 64, 0};
  std::filesystem::path output_dir = "efpred_out";
  /// Forest worker threads; 0 = hardware concurrency. Does not affect results.
  unsigned threads = 0;
  bool save_models = false;

  /// All five learners with default hyperparameters.
  static PipelineConfig with_default_models();

  /// Throws ErrorKind::kConfig when an invariant fails.
  void validate() const;

  /// Full config, including run-only fields.
  nlohmann::json to_json() const;
  static PipelineConfig from_json(const nlohmann::json& j);
  static PipelineConfig load(const std::filesystem::path& path);

  /// Hash over the fields that influence results (excludes output_dir and
  /// threads).
  std::string hash() const;
};

}  // namespace efpred
