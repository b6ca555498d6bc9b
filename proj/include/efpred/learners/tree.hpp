#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "json.hpp"

#include "efpred/common/rng.hpp"
#include "efpred/tabular/dataset.hpp"

namespace efpred {

/// 1 - sum p_c^2. Throws ErrorKind::kDomain on an all-zero count vector.
double gini_impurity(const ClassCounts& counts);

/// Rows with value <= threshold go left.
struct SplitNode {
  std::size_t feature = 0;
  double threshold = 0.0;
  std::size_t left = 0;
  std::size_t right = 0;

  friend bool operator==(const SplitNode&, const SplitNode&) = default;
};

struct LeafNode {
  OrdinalLabel label;
  ClassCounts counts{};

  friend bool operator==(const LeafNode&, const LeafNode&) = default;
};

using TreeNode = std::variant<SplitNode, LeafNode>;

struct TreeParams {
  int min_leaf = 5;
  int max_depth = 10;
};

/// Binary CART classifier stored as a flat node arena; node 0 is the root.
class DecisionTree {
 public:
  DecisionTree() = default;
  DecisionTree(std::vector<TreeNode> nodes, std::size_t n_features,
               std::vector<double> impurity_decrease);

  OrdinalLabel predict(std::span<const double> row) const;
  const LeafNode& leaf_for(std::span<const double> row) const;
  std::size_t leaf_index(std::span<const double> row) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t n_features() const noexcept { return n_features_; }
  std::size_t depth() const;

  /// Per feature: sum over its splits of (n_node*g_node - n_left*g_left -
  /// n_right*g_right) / n_root.
  const std::vector<double>& impurity_decrease() const noexcept { return impurity_decrease_; }

  nlohmann::json to_json() const;
  static DecisionTree from_json(const nlohmann::json& j);

  friend bool operator==(const DecisionTree&, const DecisionTree&) = default;

 private:
  std::vector<TreeNode> nodes_;
  std::size_t n_features_ = 0;
  std::vector<double> impurity_decrease_;
};

/// Greedy CART on Gini impurity over all features.
DecisionTree train_tree(const Dataset& d, const TreeParams& params = {});

namespace detail {

struct GrowOptions {
  int min_leaf = 1;
  int max_depth = 64;
  /// Features tried per split; 0 means all. When the sampled features give no
  /// valid split, the remaining features are tried in the same random order.
  std::size_t mtry = 0;
};

/// Grows a tree over `sample` (row indices into d, repeats allowed).
/// `rng` is required when mtry is in effect.
DecisionTree grow_tree(const Dataset& d, std::span<const std::size_t> sample,
                       const GrowOptions& opts, Rng* rng);

}  // namespace detail

}  // namespace efpred
