#include "efpred/learners/knn.hpp"

#include <algorithm>
#include <utility>

#include "efpred/common/error.hpp"
#include "efpred/learners/forest.hpp"

namespace efpred {

KnnModel::KnnModel(std::vector<double> points, std::vector<OrdinalLabel> labels,
                   std::size_t width, int k)
    : points_(std::move(points)), labels_(std::move(labels)), width_(width), k_(k) {
  if (k_ < 1 || k_ % 2 == 0) {
    throw Error(ErrorKind::kParameter, "k must be odd and positive, got " + std::to_string(k_));
  }
  if (static_cast<std::size_t>(k_) > labels_.size()) {
    throw Error(ErrorKind::kParameter, "k=" + std::to_string(k_) + " exceeds training size " +
                                           std::to_string(labels_.size()));
  }
  if (points_.size() != labels_.size() * width_) {
    throw Error(ErrorKind::kShape, "k-NN store has inconsistent dimensions");
  }
}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> row) const {
  if (row.size() != width_) {
    throw Error(ErrorKind::kShape, "row width " + std::to_string(row.size()) + ", model expects " +
                                       std::to_string(width_));
  }
  std::vector<std::pair<double, std::size_t>> dist(labels_.size());
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    double s = 0.0;
    const double* p = points_.data() + i * width_;
    for (std::size_t c = 0; c < width_; ++c) s += (p[c] - row[c]) * (p[c] - row[c]);
    dist[i] = {s, i};
  }
  const auto kth = dist.begin() + k_;
  std::partial_sort(dist.begin(), kth, dist.end());
  std::vector<std::size_t> out;
  out.reserve(static_cast<std::size_t>(k_));
  for (auto it = dist.begin(); it != kth; ++it) out.push_back(it->second);
  return out;
}

OrdinalLabel KnnModel::predict(std::span<const double> row) const {
  ClassCounts votes{};
  for (auto i : neighbors(row)) ++votes[labels_[i].index()];
  return plurality(votes);
}

nlohmann::json KnnModel::to_json() const {
  std::vector<int> labels;
  for (auto l : labels_) labels.push_back(l.index());
  return {{"k", k_}, {"width", width_}, {"points", points_}, {"labels", labels}};
}

KnnModel KnnModel::from_json(const nlohmann::json& j) {
  std::vector<OrdinalLabel> labels;
  for (const auto& l : j.at("labels")) labels.push_back(OrdinalLabel::from_index(l.get<int>()));
  return KnnModel(j.at("points").get<std::vector<double>>(), std::move(labels),
                  j.at("width").get<std::size_t>(), j.at("k").get<int>());
}

KnnModel train_knn(const Dataset& d, int k) {
  if (d.has_missing()) throw Error(ErrorKind::kTraining, "training data has missing cells");
  return KnnModel(d.values(), d.labels(), d.cols(), k);
}

}  // namespace efpred
