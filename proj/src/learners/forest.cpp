#include "efpred/learners/forest.hpp"

#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"

namespace efpred {

OrdinalLabel plurality(const ClassCounts& votes) {
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (votes[k] > votes[best]) best = k;
  }
  return OrdinalLabel::from_index(best);
}

ForestModel::ForestModel(std::vector<DecisionTree> trees, int mtry,
                         std::vector<double> oob_error_curve,
                         std::vector<std::size_t> node_histogram,
                         std::vector<double> gini_importance)
    : trees_(std::move(trees)),
      mtry_(mtry),
      oob_error_curve_(std::move(oob_error_curve)),
      node_histogram_(std::move(node_histogram)),
      gini_importance_(std::move(gini_importance)) {
  if (trees_.empty()) throw Error(ErrorKind::kInvariant, "forest has no trees");
  if (oob_error_curve_.size() != trees_.size() || node_histogram_.size() != trees_.size()) {
    throw Error(ErrorKind::kInvariant, "forest diagnostics length differs from tree count");
  }
}

ClassCounts ForestModel::votes(std::span<const double> row) const {
  ClassCounts v{};
  for (const auto& t : trees_) ++v[t.predict(row).index()];
  return v;
}

OrdinalLabel ForestModel::predict(std::span<const double> row) const {
  return plurality(votes(row));
}

nlohmann::json ForestModel::to_json() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back(t.to_json());
  return {{"mtry", mtry_},
          {"oob_error_curve", oob_error_curve_},
          {"node_histogram", node_histogram_},
          {"gini_importance", gini_importance_},
          {"trees", trees}};
}

ForestModel ForestModel::from_json(const nlohmann::json& j) {
  std::vector<DecisionTree> trees;
  for (const auto& t : j.at("trees")) trees.push_back(DecisionTree::from_json(t));
  return ForestModel(std::move(trees), j.at("mtry").get<int>(),
                     j.at("oob_error_curve").get<std::vector<double>>(),
                     j.at("node_histogram").get<std::vector<std::size_t>>(),
                     j.at("gini_importance").get<std::vector<double>>());
}

ForestModel train_forest(const Dataset& d, const ForestParams& params, std::uint64_t seed) {
  if (d.empty()) throw Error(ErrorKind::kTraining, "empty training set");
  const auto p = static_cast<int>(d.cols());
  const int mtry = params.mtry.value_or(std::max(1, static_cast<int>(std::floor(std::sqrt(p)))));
  if (mtry < 1 || mtry > p) {
    throw Error(ErrorKind::kParameter,
                "mtry " + std::to_string(mtry) + " outside [1, " + std::to_string(p) + "]");
  }
  if (params.n_trees < 1) throw Error(ErrorKind::kParameter, "n_trees must be >= 1");
  if (params.min_leaf < 1) throw Error(ErrorKind::kParameter, "min_leaf must be >= 1");

  const auto n_trees = static_cast<std::size_t>(params.n_trees);
  const std::size_t n = d.rows();
  std::vector<DecisionTree> trees(n_trees);
  std::vector<std::vector<std::uint8_t>> in_bag(n_trees);
  const detail::GrowOptions opts{params.min_leaf, params.max_depth, static_cast<std::size_t>(mtry)};

  auto build = [&](std::size_t t) {
    Rng rng(derive_seed(seed, t));
    std::uniform_int_distribution<std::size_t> draw(0, n - 1);
    std::vector<std::size_t> sample(n);
    std::vector<std::uint8_t> bag(n, 0);
    for (auto& s : sample) {
      s = draw(rng);
      bag[s] = 1;
    }
    trees[t] = detail::grow_tree(d, sample, opts, &rng);
    in_bag[t] = std::move(bag);
  };

  unsigned workers = params.threads == 0 ? std::thread::hardware_concurrency() : params.threads;
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_trees)));
  if (workers == 1) {
    for (std::size_t t = 0; t < n_trees; ++t) build(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (std::size_t t = next++; t < n_trees && !failed; t = next++) {
            try {
              build(t);
            } catch (...) {
              if (!failed.exchange(true)) failure = std::current_exception();
            }
          }
        });
      }
    }
    if (failure) std::rethrow_exception(failure);
  }

  // Cumulative out-of-bag error in tree order. Rows with no OOB vote yet are
  // excluded; before any row has one the error is reported as 0.
  std::vector<ClassCounts> oob_votes(n, ClassCounts{});
  std::vector<double> curve(n_trees, 0.0);
  for (std::size_t t = 0; t < n_trees; ++t) {
    for (std::size_t r = 0; r < n; ++r) {
      if (!in_bag[t][r]) ++oob_votes[r][trees[t].predict(d.row(r)).index()];
    }
    std::size_t voted = 0, wrong = 0;
    for (std::size_t r = 0; r < n; ++r) {
      const auto& v = oob_votes[r];
      if (v[0] + v[1] + v[2] == 0) continue;
      ++voted;
      if (plurality(v) != d.label(r)) ++wrong;
    }
    curve[t] = voted == 0 ? 0.0 : static_cast<double>(wrong) / static_cast<double>(voted);
  }

  std::vector<std::size_t> histogram(n_trees);
  std::vector<double> importance(d.cols(), 0.0);
  for (std::size_t t = 0; t < n_trees; ++t) {
    histogram[t] = trees[t].node_count();
    const auto& dec = trees[t].impurity_decrease();
    for (std::size_t f = 0; f < d.cols(); ++f) importance[f] += dec[f];
  }
  for (auto& v : importance) v /= static_cast<double>(n_trees);

  return ForestModel(std::move(trees), mtry, std::move(curve), std::move(histogram),
                     std::move(importance));
}

}  // namespace efpred
