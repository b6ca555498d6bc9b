#include <cmath>
#include <numeric>

#include "doctest.h"
#include "efpred/common/error.hpp"
#include "efpred/learners/forest.hpp"
#include "efpred/learners/tree.hpp"
#include "helpers.hpp"

using namespace efpred;
using efpred::testing::blobs;
using efpred::testing::make_dataset;

namespace {

// gini computed straight from the definition
double gini_oracle(const ClassCounts& c) {
  const double n = static_cast<double>(c[0] + c[1] + c[2]);
  double s = 0.0;
  for (auto v : c) s += (v / n) * (v / n);
  return 1.0 - s;
}

// root impurity minus the leaf impurities weighted by leaf share
double total_decrease(const DecisionTree& t) {
  ClassCounts root{};
  std::vector<const LeafNode*> leaves;
  for (const auto& node : t.nodes()) {
    if (const auto* leaf = std::get_if<LeafNode>(&node)) {
      leaves.push_back(leaf);
      for (int c = 0; c < 3; ++c) root[c] += leaf->counts[c];
    }
  }
  const double n = static_cast<double>(root[0] + root[1] + root[2]);
  double out = gini_oracle(root);
  for (const auto* leaf : leaves) {
    const double m = static_cast<double>(leaf->counts[0] + leaf->counts[1] + leaf->counts[2]);
    out -= m / n * gini_oracle(leaf->counts);
  }
  return out;
}

void check_node_invariants(const DecisionTree& t) {
  for (const auto& node : t.nodes()) {
    if (const auto* s = std::get_if<SplitNode>(&node)) {
      CHECK(std::isfinite(s->threshold));
      CHECK(s->left < t.node_count());
      CHECK(s->right < t.node_count());
    } else {
      const auto& leaf = std::get<LeafNode>(node);
      CHECK(leaf.counts[0] + leaf.counts[1] + leaf.counts[2] > 0);
    }
  }
}

}  // namespace

TEST_CASE("gini impurity") {
  CHECK(gini_impurity({42, 0, 0}) == 0.0);
  CHECK(gini_impurity({1, 1, 1}) == doctest::Approx(2.0 / 3.0));
  CHECK(gini_impurity({2, 1, 1}) == doctest::Approx(0.625));
  CHECK_THROWS_AS(gini_impurity({0, 0, 0}), Error);
}

TEST_CASE("tree: pure root is a single leaf") {
  const auto t = train_tree(make_dataset(1, {1, 2, 3, 4}, {1, 1, 1, 1}), {1, 10});
  REQUIRE(t.node_count() == 1);
  CHECK(std::get<LeafNode>(t.nodes()[0]).label.index() == 1);
}

TEST_CASE("tree: one split between 1 and 10") {
  const auto t = train_tree(make_dataset(1, {0, 1, 10, 11}, {0, 0, 2, 2}), {1, 10});
  REQUIRE(t.node_count() == 3);
  const auto& s = std::get<SplitNode>(t.nodes()[0]);
  CHECK(s.feature == 0);
  CHECK(s.threshold > 1.0);
  CHECK(s.threshold < 10.0);
  const std::vector<double> lo{1.0}, hi{10.0};
  CHECK(t.predict(lo).index() == 0);
  CHECK(t.predict(hi).index() == 2);
}

TEST_CASE("tree: max_depth 0 gives the majority stump") {
  const auto t = train_tree(make_dataset(1, {0, 1, 2, 3, 4}, {2, 2, 1, 1, 0}), {1, 0});
  REQUIRE(t.node_count() == 1);
  // (1, 2, 2) tie between 1 and 2 → lowest index
  CHECK(std::get<LeafNode>(t.nodes()[0]).label.index() == 1);
  CHECK(t.depth() == 0);
}

TEST_CASE("tree: min_leaf blocks small children") {
  const auto d = make_dataset(1, {0, 1, 2, 3, 4, 5}, {0, 1, 1, 1, 1, 1});
  const auto t = train_tree(d, {2, 10});
  for (const auto& node : t.nodes()) {
    if (const auto* leaf = std::get_if<LeafNode>(&node))
      CHECK(leaf->counts[0] + leaf->counts[1] + leaf->counts[2] >= 2);
  }
}

TEST_CASE("tree: empty data and width mismatch") {
  CHECK_THROWS_AS(train_tree(Dataset(efpred::testing::plain_schema(2), {}, {})), Error);
  const auto t = train_tree(blobs(10, 1));
  const std::vector<double> wrong{1.0, 2.0, 3.0};
  try {
    (void)t.predict(wrong);
    FAIL("wrong width accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::kShape);
  }
}

TEST_CASE("tree: every training row lands on a leaf holding its class") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = efpred::testing::random_dataset(90, 4, seed);
    for (const TreeParams p : {TreeParams{1, 64}, TreeParams{5, 3}, TreeParams{}}) {
      const auto t = train_tree(d, p);
      check_node_invariants(t);
      for (std::size_t r = 0; r < d.rows(); ++r)
        CHECK(t.leaf_for(d.row(r)).counts[d.label(r).index()] > 0);
    }
  }
}

TEST_CASE("tree: importance sums to the tree's total impurity decrease") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto d = efpred::testing::random_dataset(120, 5, seed);
    const auto t = train_tree(d, {2, 6});
    const auto& imp = t.impurity_decrease();
    const double sum = std::accumulate(imp.begin(), imp.end(), 0.0);
    CHECK(std::abs(sum - total_decrease(t)) < 1e-9);
    for (double v : imp) CHECK(v >= 0.0);
  }
}

TEST_CASE("tree: json round trip") {
  const auto t = train_tree(blobs(20, 3));
  CHECK(DecisionTree::from_json(t.to_json()) == t);
}

TEST_CASE("forest: plurality and tie-break") {
  CHECK(plurality({3, 3, 3}).index() == 0);
  CHECK(plurality({2, 0, 1}).index() == 0);
  CHECK(plurality({1, 1, 1}).index() == 0);
  CHECK(plurality({0, 2, 2}).index() == 1);
  CHECK(plurality({0, 0, 1}).index() == 2);
}

TEST_CASE("forest: a single tree forest predicts like its tree") {
  const auto d = efpred::testing::random_dataset(60, 3, 8);
  const auto f = train_forest(d, {1, std::nullopt, 1, 64, 1}, 17);
  REQUIRE(f.n_trees() == 1);
  for (std::size_t r = 0; r < d.rows(); ++r) CHECK(f.predict(d.row(r)) == f.trees()[0].predict(d.row(r)));
}

TEST_CASE("forest: shape invariants and blob accuracy") {
  const auto d = blobs(40, 21);
  const auto f = train_forest(d, {100, std::nullopt, 1, 64, 0}, 5);
  CHECK(f.n_trees() == 100);
  CHECK(f.node_histogram().size() == 100);
  CHECK(f.oob_error_curve().size() == 100);
  CHECK(f.mtry() == 1);
  for (std::size_t t = 0; t < f.n_trees(); ++t) CHECK(f.node_histogram()[t] == f.trees()[t].node_count());
  for (double v : f.gini_importance()) CHECK(v >= 0.0);
  for (double v : f.oob_error_curve()) CHECK((v >= 0.0 && v <= 1.0));
  CHECK(f.oob_error_curve().back() <= 0.1);

  const auto held = blobs(40, 22);
  int wrong = 0;
  for (std::size_t r = 0; r < held.rows(); ++r) wrong += f.predict(held.row(r)) != held.label(r);
  CHECK(wrong / static_cast<double>(held.rows()) <= 0.1);
}

TEST_CASE("forest: per-tree importance identity") {
  const auto d = efpred::testing::random_dataset(80, 4, 12);
  const auto f = train_forest(d, {20, 2, 1, 64, 1}, 9);
  std::vector<double> mean(4, 0.0);
  for (const auto& t : f.trees()) {
    const auto& imp = t.impurity_decrease();
    CHECK(std::abs(std::accumulate(imp.begin(), imp.end(), 0.0) - total_decrease(t)) < 1e-9);
    for (int j = 0; j < 4; ++j) mean[j] += imp[j] / 20.0;
  }
  for (int j = 0; j < 4; ++j) CHECK(f.gini_importance()[j] == doctest::Approx(mean[j]).epsilon(1e-12));
}

TEST_CASE("forest: deterministic for any thread count") {
  const auto d = efpred::testing::random_dataset(90, 5, 3);
  const auto a = train_forest(d, {40, 2, 1, 64, 1}, 123);
  const auto b = train_forest(d, {40, 2, 1, 64, 4}, 123);
  const auto c = train_forest(d, {40, 2, 1, 64, 0}, 123);
  CHECK(a == b);
  CHECK(a == c);
  CHECK_FALSE(a == train_forest(d, {40, 2, 1, 64, 1}, 124));
  CHECK(ForestModel::from_json(a.to_json()) == a);
}

TEST_CASE("forest: mtry range is checked") {
  const auto d = efpred::testing::random_dataset(30, 3, 3);
  for (int bad : {0, 4}) {
    try {
      train_forest(d, {5, bad, 1, 64, 1}, 1);
      FAIL("mtry accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kParameter);
    }
  }
}
