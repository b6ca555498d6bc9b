#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "efpred/learners/tree.hpp"

namespace efpred {

struct ForestParams {
  int n_trees = 500;
  /// Features tried per split; unset means floor(sqrt(p)).
  std::optional<int> mtry;
  int min_leaf = 1;
  int max_depth = 64;
  /// Worker threads for tree-parallel training; 0 = hardware concurrency.
  /// Results do not depend on this value.
  unsigned threads = 0;
};

class ForestModel {
 public:
  ForestModel() = default;
  ForestModel(std::vector<DecisionTree> trees, int mtry, std::vector<double> oob_error_curve,
              std::vector<std::size_t> node_histogram, std::vector<double> gini_importance);

  /// Majority vote; tie -> lowest class index.
  OrdinalLabel predict(std::span<const double> row) const;
  ClassCounts votes(std::span<const double> row) const;

  const std::vector<DecisionTree>& trees() const noexcept { return trees_; }
  std::size_t n_trees() const noexcept { return trees_.size(); }
  int mtry() const noexcept { return mtry_; }
  /// Entry t is the OOB error using the first t+1 trees.
  const std::vector<double>& oob_error_curve() const noexcept { return oob_error_curve_; }
  const std::vector<std::size_t>& node_histogram() const noexcept { return node_histogram_; }
  /// Mean over trees of each feature's impurity decrease.
  const std::vector<double>& gini_importance() const noexcept { return gini_importance_; }

  nlohmann::json to_json() const;
  static ForestModel from_json(const nlohmann::json& j);

  friend bool operator==(const ForestModel&, const ForestModel&) = default;

 private:
  std::vector<DecisionTree> trees_;
  int mtry_ = 0;
  std::vector<double> oob_error_curve_;
  std::vector<std::size_t> node_histogram_;
  std::vector<double> gini_importance_;
};

/// Bootstrap-aggregated CART trees. Tree t draws its bootstrap sample and
/// per-split feature subsets from a stream seeded by derive_seed(seed, t), so
/// the model is identical for any thread count.
ForestModel train_forest(const Dataset& d, const ForestParams& params, std::uint64_t seed);

/// Plurality over per-class vote counts; tie -> lowest class index.
OrdinalLabel plurality(const ClassCounts& votes);

}  // namespace efpred
