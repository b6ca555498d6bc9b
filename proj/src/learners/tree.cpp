#include "efpred/learners/tree.hpp"

#include <algorithm>
#include <numeric>

#include "efpred/common/error.hpp"

namespace efpred {
namespace {

double sum_sq_over_n(const ClassCounts& c) {
  const std::size_t n = c[0] + c[1] + c[2];
  if (n == 0) return 0.0;
  double s = 0.0;
  for (auto x : c) s += static_cast<double>(x) * static_cast<double>(x);
  return s / static_cast<double>(n);
}

OrdinalLabel majority(const ClassCounts& c) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (c[k] > c[best]) best = k;
  }
  return OrdinalLabel::from_index(best);
}

bool is_pure(const ClassCounts& c) {
  int nonzero = 0;
  for (auto x : c) nonzero += x > 0 ? 1 : 0;
  return nonzero <= 1;
}

struct Candidate {
  std::size_t feature = 0;
  double threshold = 0.0;
  double score = 0.0;  // sum_sq_over_n(left) + sum_sq_over_n(right); larger is better
};

class Grower {
 public:
  Grower(const Dataset& d, const detail::GrowOptions& opts, Rng* rng, std::size_t n_root)
      : d_(d), opts_(opts), rng_(rng), n_root_(static_cast<double>(n_root)),
        importance_(d.cols(), 0.0) {
    feature_order_.resize(d.cols());
    std::iota(feature_order_.begin(), feature_order_.end(), std::size_t{0});
  }

  std::size_t grow(std::vector<std::size_t> rows, int depth) {
    ClassCounts counts{};
    for (auto r : rows) ++counts[d_.label(r).index()];
    const std::size_t slot = nodes_.size();
    nodes_.emplace_back(LeafNode{majority(counts), counts});

    if (is_pure(counts) || depth >= opts_.max_depth ||
        rows.size() < 2 * static_cast<std::size_t>(opts_.min_leaf)) {
      return slot;
    }
    const auto best = find_split(rows);
    if (!best) return slot;

    std::vector<std::size_t> left, right;
    for (auto r : rows) {
      (d_.at(r, best->feature) <= best->threshold ? left : right).push_back(r);
    }
    const double decrease = best->score - sum_sq_over_n(counts);
    importance_[best->feature] += std::max(0.0, decrease) / n_root_;
    rows.clear();
    rows.shrink_to_fit();

    const std::size_t l = grow(std::move(left), depth + 1);
    const std::size_t r = grow(std::move(right), depth + 1);
    nodes_[slot] = SplitNode{best->feature, best->threshold, l, r};
    return slot;
  }

  DecisionTree finish() && {
    return DecisionTree(std::move(nodes_), d_.cols(), std::move(importance_));
  }

 private:
  std::optional<Candidate> find_split(const std::vector<std::size_t>& rows) {
    const std::size_t p = d_.cols();
    const bool subsample = opts_.mtry > 0 && opts_.mtry < p;
    if (subsample) std::shuffle(feature_order_.begin(), feature_order_.end(), *rng_);
    const std::size_t first_batch = subsample ? opts_.mtry : p;

    std::optional<Candidate> best;
    for (std::size_t i = 0; i < p; ++i) {
      if (i >= first_batch && best) break;
      scan_feature(rows, feature_order_[i], best);
    }
    return best;
  }

  void scan_feature(const std::vector<std::size_t>& rows, std::size_t f,
                    std::optional<Candidate>& best) {
    sorted_.clear();
    for (auto r : rows) sorted_.emplace_back(d_.at(r, f), d_.label(r).index());
    std::sort(sorted_.begin(), sorted_.end());
    const std::size_t n = sorted_.size();
    const auto min_leaf = static_cast<std::size_t>(opts_.min_leaf);

    ClassCounts total{};
    for (const auto& [v, c] : sorted_) ++total[c];
    ClassCounts left{};
    for (std::size_t i = 0; i + 1 < n; ++i) {
      ++left[sorted_[i].second];
      const double a = sorted_[i].first;
      const double b = sorted_[i + 1].first;
      if (!(a < b)) continue;
      const std::size_t n_left = i + 1;
      if (n_left < min_leaf || n - n_left < min_leaf) continue;
      ClassCounts right{};
      for (int k = 0; k < kNumClasses; ++k) right[k] = total[k] - left[k];
      const double score = sum_sq_over_n(left) + sum_sq_over_n(right);
      if (!best || score > best->score) {
        double mid = a + (b - a) / 2.0;
        if (!(mid < b)) mid = a;
        best = Candidate{f, mid, score};
      }
    }
  }

  const Dataset& d_;
  detail::GrowOptions opts_;
  Rng* rng_;
  double n_root_;
  std::vector<TreeNode> nodes_;
  std::vector<double> importance_;
  std::vector<std::size_t> feature_order_;
  std::vector<std::pair<double, int>> sorted_;
};

}  // namespace

double gini_impurity(const ClassCounts& counts) {
  const std::size_t n = counts[0] + counts[1] + counts[2];
  if (n == 0) throw Error(ErrorKind::kDomain, "gini impurity of an empty node");
  return 1.0 - sum_sq_over_n(counts) / static_cast<double>(n);
}

DecisionTree::DecisionTree(std::vector<TreeNode> nodes, std::size_t n_features,
                           std::vector<double> impurity_decrease)
    : nodes_(std::move(nodes)), n_features_(n_features),
      impurity_decrease_(std::move(impurity_decrease)) {
  if (nodes_.empty()) throw Error(ErrorKind::kInvariant, "tree has no nodes");
  if (impurity_decrease_.size() != n_features_) {
    throw Error(ErrorKind::kInvariant, "importance width differs from feature count");
  }
}

std::size_t DecisionTree::leaf_index(std::span<const double> row) const {
  if (row.size() != n_features_) {
    throw Error(ErrorKind::kShape, "row width " + std::to_string(row.size()) + ", tree expects " +
                                       std::to_string(n_features_));
  }
  std::size_t i = 0;
  while (const auto* s = std::get_if<SplitNode>(&nodes_[i])) {
    i = row[s->feature] <= s->threshold ? s->left : s->right;
  }
  return i;
}

const LeafNode& DecisionTree::leaf_for(std::span<const double> row) const {
  return std::get<LeafNode>(nodes_[leaf_index(row)]);
}

OrdinalLabel DecisionTree::predict(std::span<const double> row) const {
  return leaf_for(row).label;
}

std::size_t DecisionTree::depth() const {
  std::size_t deepest = 0;
  std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
  while (!stack.empty()) {
    auto [i, dep] = stack.back();
    stack.pop_back();
    deepest = std::max(deepest, dep);
    if (const auto* s = std::get_if<SplitNode>(&nodes_[i])) {
      stack.emplace_back(s->left, dep + 1);
      stack.emplace_back(s->right, dep + 1);
    }
  }
  return deepest;
}

nlohmann::json DecisionTree::to_json() const {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& n : nodes_) {
    if (const auto* s = std::get_if<SplitNode>(&n)) {
      nodes.push_back({{"split", {s->feature, s->threshold, s->left, s->right}}});
    } else {
      const auto& l = std::get<LeafNode>(n);
      nodes.push_back({{"leaf", {l.label.index(), l.counts[0], l.counts[1], l.counts[2]}}});
    }
  }
  return {{"n_features", n_features_}, {"impurity_decrease", impurity_decrease_}, {"nodes", nodes}};
}

DecisionTree DecisionTree::from_json(const nlohmann::json& j) {
  std::vector<TreeNode> nodes;
  for (const auto& n : j.at("nodes")) {
    if (n.contains("split")) {
      const auto& s = n.at("split");
      nodes.emplace_back(SplitNode{s.at(0).get<std::size_t>(), s.at(1).get<double>(),
                                   s.at(2).get<std::size_t>(), s.at(3).get<std::size_t>()});
    } else {
      const auto& l = n.at("leaf");
      nodes.emplace_back(LeafNode{OrdinalLabel::from_index(l.at(0).get<int>()),
                                  {l.at(1).get<std::size_t>(), l.at(2).get<std::size_t>(),
                                   l.at(3).get<std::size_t>()}});
    }
  }
  for (const auto& n : nodes) {
    if (const auto* s = std::get_if<SplitNode>(&n)) {
      if (s->left >= nodes.size() || s->right >= nodes.size()) {
        throw Error(ErrorKind::kParse, "tree child index out of range");
      }
    }
  }
  return DecisionTree(std::move(nodes), j.at("n_features").get<std::size_t>(),
                      j.at("impurity_decrease").get<std::vector<double>>());
}

DecisionTree train_tree(const Dataset& d, const TreeParams& params) {
  if (params.min_leaf < 1) throw Error(ErrorKind::kParameter, "min_leaf must be >= 1");
  if (params.max_depth < 0) throw Error(ErrorKind::kParameter, "max_depth must be >= 0");
  std::vector<std::size_t> rows(d.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return detail::grow_tree(d, rows, {params.min_leaf, params.max_depth, 0}, nullptr);
}

namespace detail {

DecisionTree grow_tree(const Dataset& d, std::span<const std::size_t> sample,
                       const GrowOptions& opts, Rng* rng) {
  if (sample.empty() || d.cols() == 0) throw Error(ErrorKind::kTraining, "empty training set");
  if (d.has_missing()) throw Error(ErrorKind::kTraining, "training data has missing cells");
  if (opts.mtry > 0 && opts.mtry < d.cols() && rng == nullptr) {
    throw Error(ErrorKind::kInvariant, "feature subsampling needs a random stream");
  }
  Grower g(d, opts, rng, sample.size());
  g.grow(std::vector<std::size_t>(sample.begin(), sample.end()), 0);
  return std::move(g).finish();
}

}  // namespace detail
}  // namespace efpred
