#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "json.hpp"

#include "efpred/learners/forest.hpp"
#include "efpred/learners/knn.hpp"
#include "efpred/learners/ordinal_logit.hpp"
#include "efpred/learners/svm.hpp"
#include "efpred/learners/tree.hpp"
#include "efpred/tabular/preprocess.hpp"

namespace efpred {

enum class ModelFamily { kDecisionTree, kRandomForest, kKnn, kOrdinalLogit, kSvm };

/// Canonical identifiers: decision_tree, random_forest, knn, ordinal_logit, svm.
std::string_view to_string(ModelFamily family);
ModelFamily parse_model_family(std::string_view name);

using ModelParams = std::variant<TreeParams, ForestParams, KnnParams, OlrParams, SvmParams>;

/// A learner family plus hyperparameters. `id` names it in reports and
/// rankings; `seed` feeds the forest's random streams.
struct ModelSpec {
  std::string id;
  ModelParams params;
  std::uint64_t seed = 0;

  ModelFamily family() const;
};

/// Default hyperparameters for a family.
ModelSpec default_spec(ModelFamily family, std::uint64_t seed = 0);

nlohmann::json params_to_json(const ModelParams& params);
ModelParams params_from_json(ModelFamily family, const nlohmann::json& j);

using FittedModel = std::variant<DecisionTree, ForestModel, KnnModel, OrdinalLogitModel, SvmModel>;

/// Fitted learner plus the scaling it was trained under; predict() takes raw
/// (unscaled) feature rows.
class TrainedModel {
 public:
  TrainedModel(FittedModel model, ScalingParams scaling, FeatureSchema schema);

  ModelFamily family() const;
  OrdinalLabel predict(std::span<const double> raw_row) const;
  const FittedModel& model() const noexcept { return model_; }
  const ScalingParams& scaling() const noexcept { return scaling_; }
  const FeatureSchema& schema() const noexcept { return schema_; }

  /// Versioned structured text; reals round-trip exactly.
  nlohmann::json to_json() const;
  static TrainedModel from_json(const nlohmann::json& j);
  void save(const std::filesystem::path& path) const;
  static TrainedModel load(const std::filesystem::path& path);

 private:
  FittedModel model_;
  ScalingParams scaling_;
  FeatureSchema schema_;
};

/// Standardizes d, then trains the learner named by spec.
TrainedModel fit_model(const ModelSpec& spec, const Dataset& d);

inline constexpr std::string_view kModelFormatVersion = "efpred-model/1";

}  // namespace efpred
