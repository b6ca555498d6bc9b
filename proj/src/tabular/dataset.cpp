#include "efpred/tabular/dataset.hpp"

#include <algorithm>

#include "efpred/common/error.hpp"

namespace efpred {

Dataset::Dataset(FeatureSchema schema, std::vector<double> values, std::vector<OrdinalLabel> labels,
                 std::vector<std::uint8_t> missing)
    : schema_(std::move(schema)),
      values_(std::move(values)),
      labels_(std::move(labels)),
      missing_(std::move(missing)) {
  const std::size_t cells = labels_.size() * schema_.width();
  if (values_.size() != cells || missing_.size() != cells) {
    throw Error(ErrorKind::kShape, "dataset has " + std::to_string(labels_.size()) + " labels and " +
                                       std::to_string(schema_.width()) + " columns but " +
                                       std::to_string(values_.size()) + " values / " +
                                       std::to_string(missing_.size()) + " mask cells");
  }
}

Dataset::Dataset(FeatureSchema schema, std::vector<double> values, std::vector<OrdinalLabel> labels)
    : schema_(std::move(schema)), values_(std::move(values)), labels_(std::move(labels)) {
  missing_.assign(values_.size(), 0);
  if (values_.size() != labels_.size() * schema_.width()) {
    throw Error(ErrorKind::kShape, "dataset has " + std::to_string(labels_.size()) + " labels and " +
                                       std::to_string(schema_.width()) + " columns but " +
                                       std::to_string(values_.size()) + " values");
  }
}

bool Dataset::has_missing() const {
  return std::any_of(missing_.begin(), missing_.end(), [](std::uint8_t m) { return m != 0; });
}

ClassCounts Dataset::class_counts() const {
  ClassCounts counts{};
  for (auto l : labels_) ++counts[l.index()];
  return counts;
}

std::vector<double> Dataset::column(std::size_t c) const {
  std::vector<double> out(rows());
  for (std::size_t r = 0; r < rows(); ++r) out[r] = at(r, c);
  return out;
}

Dataset Dataset::subset_rows(std::span<const std::size_t> rows) const {
  const std::size_t w = cols();
  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  std::vector<OrdinalLabel> labels;
  values.reserve(rows.size() * w);
  missing.reserve(rows.size() * w);
  labels.reserve(rows.size());
  for (std::size_t r : rows) {
    if (r >= labels_.size()) throw Error(ErrorKind::kShape, "row index out of range");
    values.insert(values.end(), values_.begin() + r * w, values_.begin() + (r + 1) * w);
    missing.insert(missing.end(), missing_.begin() + r * w, missing_.begin() + (r + 1) * w);
    labels.push_back(labels_[r]);
  }
  return Dataset(schema_, std::move(values), std::move(labels), std::move(missing));
}

Dataset Dataset::select_features(const std::vector<std::string>& names) const {
  FeatureSchema sub = schema_.select(names);
  std::vector<std::size_t> src;
  for (const auto& c : sub.columns()) src.push_back(*schema_.index_of(c.name));
  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  values.reserve(rows() * src.size());
  missing.reserve(rows() * src.size());
  for (std::size_t r = 0; r < rows(); ++r) {
    for (std::size_t c : src) {
      values.push_back(at(r, c));
      missing.push_back(missing_[r * cols() + c]);
    }
  }
  return Dataset(std::move(sub), std::move(values), labels_, std::move(missing));
}

}  // namespace efpred
