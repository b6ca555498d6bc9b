#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "efpred/learners/forest.hpp"
#include "efpred/tabular/dataset.hpp"

namespace efpred {

/// sqrt(mean((predicted - actual)^2)). Throws ErrorKind::kShape on length
/// mismatch or empty input.
double rmse(std::span<const double> predicted, std::span<const double> actual);

struct ImportanceRanking {
  /// Descending by score; equal scores ordered by feature name.
  std::vector<std::pair<std::string, double>> entries;

  std::vector<std::string> top(std::size_t n) const;

  nlohmann::json to_json() const;
  static ImportanceRanking from_json(const nlohmann::json& j);
  friend bool operator==(const ImportanceRanking&, const ImportanceRanking&) = default;
};

/// Gini importance of every schema feature from one forest on all features.
ImportanceRanking rank_features(const Dataset& d, const ForestParams& params, std::uint64_t seed);

/// RMSE of pooled out-of-fold forest predictions, class indices taken as
/// numbers. Folds: stratified_folds(d, k, seed); forest seed: seed.
double cv_rmse(const Dataset& d, const ForestParams& params, int k, std::uint64_t seed);

struct RfePoint {
  std::size_t size = 0;
  double rmse = 0.0;
  std::vector<std::string> features;
  /// Ranking of `features`, used to choose the next (smaller) subset.
  ImportanceRanking ranking;

  friend bool operator==(const RfePoint&, const RfePoint&) = default;
};

struct RfeResult {
  std::vector<RfePoint> curve;
  std::vector<std::string> selected;
  std::size_t selected_size = 0;

  nlohmann::json to_json() const;
  static RfeResult from_json(const nlohmann::json& j);
  /// "size,rmse" lines with a header.
  std::string curve_csv() const;

  friend bool operator==(const RfeResult&, const RfeResult&) = default;
};

/// Recursive feature elimination. At each requested size (strictly
/// descending, each in [1, p]) the subset's CV RMSE is recorded, a forest is
/// fit to rank it, and the lowest-ranked features are dropped to reach the
/// next size. The selected subset is the curve minimum; ties go to the
/// smaller subset.
RfeResult run_rfe(const Dataset& d, const std::vector<std::size_t>& sizes, int k,
                  std::uint64_t seed, const ForestParams& params);

}  // namespace efpred
