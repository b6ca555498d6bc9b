#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "efpred/tabular/schema.hpp"

namespace efpred {

using ClassCounts = std::array<std::size_t, kNumClasses>;

/// Row-major feature matrix with ordinal labels and a per-cell missing mask.
/// Missing cells hold NaN. Immutable once built; transformations return new
/// datasets.
class Dataset {
 public:
  Dataset() = default;
  Dataset(FeatureSchema schema, std::vector<double> values, std::vector<OrdinalLabel> labels,
          std::vector<std::uint8_t> missing);
  /// Fully observed data (all-false mask).
  Dataset(FeatureSchema schema, std::vector<double> values, std::vector<OrdinalLabel> labels);

  const FeatureSchema& schema() const noexcept { return schema_; }
  std::size_t rows() const noexcept { return labels_.size(); }
  std::size_t cols() const noexcept { return schema_.width(); }
  bool empty() const noexcept { return labels_.empty(); }

  std::span<const double> row(std::size_t r) const {
    return {values_.data() + r * cols(), cols()};
  }
  double at(std::size_t r, std::size_t c) const { return values_[r * cols() + c]; }
  bool is_missing(std::size_t r, std::size_t c) const { return missing_[r * cols() + c] != 0; }
  bool has_missing() const;

  OrdinalLabel label(std::size_t r) const { return labels_[r]; }
  const std::vector<OrdinalLabel>& labels() const noexcept { return labels_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<std::uint8_t>& missing_mask() const noexcept { return missing_; }

  ClassCounts class_counts() const;
  std::vector<double> column(std::size_t c) const;

  /// Rows in the given order; duplicates allowed.
  Dataset subset_rows(std::span<const std::size_t> rows) const;
  /// Named feature columns, kept in schema order.
  Dataset select_features(const std::vector<std::string>& names) const;

 private:
  FeatureSchema schema_;
  std::vector<double> values_;
  std::vector<OrdinalLabel> labels_;
  std::vector<std::uint8_t> missing_;
};

}  // namespace efpred
