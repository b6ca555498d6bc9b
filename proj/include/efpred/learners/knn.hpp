#pragma once

#include <span>
#include <vector>

#include "json.hpp"

#include "efpred/tabular/dataset.hpp"

namespace efpred {

struct KnnParams {
  int k = 5;
};

/// Stores the (already standardized) training matrix. Neighbors are ranked by
/// Euclidean distance, ties broken by lower training row index; the vote is a
/// plurality with ties going to the lowest class index.
class KnnModel {
 public:
  KnnModel() = default;
  KnnModel(std::vector<double> points, std::vector<OrdinalLabel> labels, std::size_t width, int k);

  OrdinalLabel predict(std::span<const double> row) const;
  /// Training row indices of the k nearest neighbors, nearest first.
  std::vector<std::size_t> neighbors(std::span<const double> row) const;

  int k() const noexcept { return k_; }
  std::size_t width() const noexcept { return width_; }
  std::size_t size() const noexcept { return labels_.size(); }

  nlohmann::json to_json() const;
  static KnnModel from_json(const nlohmann::json& j);

  friend bool operator==(const KnnModel&, const KnnModel&) = default;

 private:
  std::vector<double> points_;
  std::vector<OrdinalLabel> labels_;
  std::size_t width_ = 0;
  int k_ = 1;
};

/// Throws ErrorKind::kParameter for even k or k larger than the row count.
KnnModel train_knn(const Dataset& d, int k);

}  // namespace efpred
