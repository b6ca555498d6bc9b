#include <algorithm>
#include <random>

#include "doctest.h"
#include "efpred/common/error.hpp"
#include "efpred/learners/knn.hpp"
#include "helpers.hpp"

using namespace efpred;
using efpred::testing::make_dataset;

namespace {

// exhaustive scan: sort every row by (squared distance, index), vote over the first k
int brute_force(const Dataset& d, std::span<const double> q, int k) {
  std::vector<std::pair<double, std::size_t>> all;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < d.cols(); ++c) s += (d.at(r, c) - q[c]) * (d.at(r, c) - q[c]);
    all.emplace_back(s, r);
  }
  std::sort(all.begin(), all.end());
  int votes[3] = {0, 0, 0};
  for (int i = 0; i < k; ++i) ++votes[d.label(all[i].second).index()];
  int best = 0;
  for (int c = 1; c < 3; ++c)
    if (votes[c] > votes[best]) best = c;
  return best;
}

}  // namespace

TEST_CASE("knn: a query on a training row with k=1") {
  const auto d = efpred::testing::random_dataset(30, 3, 2);
  const auto m = train_knn(d, 1);
  for (std::size_t r = 0; r < d.rows(); ++r) CHECK(m.predict(d.row(r)) == d.label(r));
}

TEST_CASE("knn: three points in one dimension") {
  const auto m = train_knn(make_dataset(1, {0.0, 0.1, 5.0}, {0, 0, 2}), 3);
  const std::vector<double> q{0.05};
  CHECK(m.predict(q).index() == 0);
}

TEST_CASE("knn: distance ties go to the lower row") {
  // rows 1 and 2 are both at distance 1 from the query; only one fits in k=1
  const auto m = train_knn(make_dataset(1, {5.0, -1.0, 1.0}, {0, 1, 2}), 1);
  const std::vector<double> q{0.0};
  CHECK(m.neighbors(q) == std::vector<std::size_t>{1});
  CHECK(m.predict(q).index() == 1);
}

TEST_CASE("knn: vote ties go to the lowest class") {
  const auto m = train_knn(make_dataset(1, {0.0, 0.1, 0.2}, {2, 1, 0}), 3);
  const std::vector<double> q{0.1};
  CHECK(m.predict(q).index() == 0);
}

TEST_CASE("knn: parameter errors") {
  const auto d = efpred::testing::random_dataset(9, 2, 1);
  for (int bad : {2, 0, 11}) {
    try {
      train_knn(d, bad);
      FAIL("k accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kParameter);
    }
  }
}

TEST_CASE("knn: agrees with the brute-force scan on 200 queries") {
  const auto d = efpred::testing::random_dataset(150, 4, 77);
  std::mt19937_64 rng(78);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k : {1, 3, 5, 7}) {
    const auto m = train_knn(d, k);
    for (int i = 0; i < 200; ++i) {
      std::vector<double> q(4);
      for (auto& x : q) x = g(rng);
      CHECK(m.predict(q).index() == brute_force(d, q, k));
    }
  }
  // integer grid data makes distance ties common
  std::vector<double> v;
  std::vector<int> y;
  std::uniform_int_distribution<int> cell(0, 3), lab(0, 2);
  for (int i = 0; i < 60; ++i) {
    v.push_back(cell(rng));
    v.push_back(cell(rng));
    y.push_back(lab(rng));
  }
  const auto grid = make_dataset(2, v, y);
  const auto m = train_knn(grid, 5);
  for (int i = 0; i < 200; ++i) {
    const std::vector<double> q{static_cast<double>(cell(rng)), static_cast<double>(cell(rng))};
    CHECK(m.predict(q).index() == brute_force(grid, q, 5));
  }
  CHECK(KnnModel::from_json(m.to_json()) == m);
}
