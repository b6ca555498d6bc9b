#include "efpred/eval/confusion.hpp"

#include "efpred/common/error.hpp"

namespace efpred {

ConfusionMatrix::ConfusionMatrix(const Counts& counts) : counts_(counts) {
  for (const auto& row : counts_) {
    for (auto c : row) {
      if (c < 0) throw Error(ErrorKind::kDomain, "confusion matrix count is negative");
    }
  }
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t s = 0;
  for (const auto& row : counts_) {
    for (auto c : row) s += c;
  }
  return s;
}

std::int64_t ConfusionMatrix::trace() const {
  std::int64_t s = 0;
  for (int c = 0; c < kNumClasses; ++c) s += counts_[c][c];
  return s;
}

std::int64_t ConfusionMatrix::row_sum(int actual) const {
  std::int64_t s = 0;
  for (int p = 0; p < kNumClasses; ++p) s += counts_[actual][p];
  return s;
}

std::int64_t ConfusionMatrix::col_sum(int predicted) const {
  std::int64_t s = 0;
  for (int a = 0; a < kNumClasses; ++a) s += counts_[a][predicted];
  return s;
}

ConfusionMatrix ConfusionMatrix::transposed() const {
  Counts t{};
  for (int a = 0; a < kNumClasses; ++a) {
    for (int p = 0; p < kNumClasses; ++p) t[p][a] = counts_[a][p];
  }
  return ConfusionMatrix(t);
}

ConfusionMatrix ConfusionMatrix::relabeled(const std::array<int, kNumClasses>& perm) const {
  Counts out{};
  for (int a = 0; a < kNumClasses; ++a) {
    for (int p = 0; p < kNumClasses; ++p) out[perm[a]][perm[p]] = counts_[a][p];
  }
  return ConfusionMatrix(out);
}

nlohmann::json ConfusionMatrix::to_json() const {
  return counts_;
}

ConfusionMatrix ConfusionMatrix::from_json(const nlohmann::json& j) {
  return ConfusionMatrix(j.get<Counts>());
}

ConfusionMatrix confusion_matrix(std::span<const OrdinalLabel> actual,
                                 std::span<const OrdinalLabel> predicted) {
  if (actual.size() != predicted.size()) {
    throw Error(ErrorKind::kShape, "actual has " + std::to_string(actual.size()) +
                                       " labels, predicted has " + std::to_string(predicted.size()));
  }
  if (actual.empty()) throw Error(ErrorKind::kShape, "no labels to tabulate");
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < actual.size(); ++i) cm.add(actual[i], predicted[i]);
  return cm;
}

}  // namespace efpred
