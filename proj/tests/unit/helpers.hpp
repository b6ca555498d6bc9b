#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "efpred/tabular/dataset.hpp"
#include "efpred/tabular/schema.hpp"

namespace efpred::testing {

// schema of p continuous columns named x0..x{p-1}
inline FeatureSchema plain_schema(std::size_t p) {
  std::vector<Column> cols;
  for (std::size_t i = 0; i < p; ++i) cols.push_back({"x" + std::to_string(i), ColumnKind::kContinuous});
  return FeatureSchema(std::move(cols), "y");
}

inline std::vector<OrdinalLabel> labels_of(const std::vector<int>& idx) {
  std::vector<OrdinalLabel> out;
  for (int i : idx) out.push_back(OrdinalLabel::from_index(i));
  return out;
}

inline Dataset make_dataset(std::size_t p, std::vector<double> values, const std::vector<int>& labels) {
  return Dataset(plain_schema(p), std::move(values), labels_of(labels));
}

// three gaussian blobs centred on (0,0), (4,0), (0,4)
inline Dataset blobs(std::size_t per_class, std::uint64_t seed, double sd = 0.5) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  const double cx[3] = {0.0, 4.0, 0.0}, cy[3] = {0.0, 0.0, 4.0};
  std::vector<double> v;
  std::vector<int> y;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int c = 0; c < 3; ++c) {
      v.push_back(cx[c] + noise(rng));
      v.push_back(cy[c] + noise(rng));
      y.push_back(c);
    }
  }
  return make_dataset(2, std::move(v), y);
}

inline Dataset random_dataset(std::size_t n, std::size_t p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> v(n * p);
  for (auto& x : v) x = g(rng);
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = static_cast<int>(i % 3);
  std::shuffle(y.begin(), y.end(), rng);
  return make_dataset(p, std::move(v), y);
}

}  // namespace efpred::testing
