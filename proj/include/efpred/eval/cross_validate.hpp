#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "efpred/eval/confusion.hpp"
#include "efpred/learners/model.hpp"
#include "efpred/tabular/folds.hpp"

namespace efpred {

struct CvResult {
  std::string model_id;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracies;
  double mean_accuracy = 0.0;
  /// Out-of-fold prediction for every row of the evaluated dataset.
  std::vector<OrdinalLabel> oof_predictions;
  ConfusionMatrix pooled;

  nlohmann::json to_json() const;
  static CvResult from_json(const nlohmann::json& j);

  friend bool operator==(const CvResult&, const CvResult&) = default;
};

/// For each fold: standardize on the training split, train, predict the
/// held-out rows. Fold f trains forests with seed derive_seed(spec.seed, f).
/// Training failures are rethrown as ErrorKind::kCrossValidation naming the fold.
CvResult cross_validate(const Dataset& d, const ModelSpec& spec, const FoldPlan& plan);

struct RankEntry {
  int rank = 0;
  std::string model_id;
  double mean_accuracy = 0.0;
  double macro_f = 0.0;

  nlohmann::json to_json() const;
  static RankEntry from_json(const nlohmann::json& j);
  friend bool operator==(const RankEntry&, const RankEntry&) = default;
};

/// Descending mean accuracy; ties by macro F of the pooled matrix, then by id.
std::vector<RankEntry> rank_models(std::span<const CvResult> results);

}  // namespace efpred
