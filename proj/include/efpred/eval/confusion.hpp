#pragma once

#include <array>
#include <cstdint>
#include <span>

#include "json.hpp"

#include "efpred/tabular/schema.hpp"

namespace efpred {

/// 3x3 counts; rows = actual class, columns = predicted class.
class ConfusionMatrix {
 public:
  using Counts = std::array<std::array<std::int64_t, kNumClasses>, kNumClasses>;

  ConfusionMatrix() = default;
  /// Throws ErrorKind::kDomain on a negative count.
  explicit ConfusionMatrix(const Counts& counts);

  std::int64_t at(int actual, int predicted) const { return counts_[actual][predicted]; }
  const Counts& counts() const noexcept { return counts_; }
  std::int64_t total() const;
  std::int64_t trace() const;
  std::int64_t row_sum(int actual) const;
  std::int64_t col_sum(int predicted) const;

  ConfusionMatrix transposed() const;
  /// Relabels classes: class c becomes perm[c] on both axes.
  ConfusionMatrix relabeled(const std::array<int, kNumClasses>& perm) const;

  void add(OrdinalLabel actual, OrdinalLabel predicted) {
    ++counts_[actual.index()][predicted.index()];
  }

  nlohmann::json to_json() const;
  static ConfusionMatrix from_json(const nlohmann::json& j);

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  Counts counts_{};
};

/// Throws ErrorKind::kShape on length mismatch or empty input.
ConfusionMatrix confusion_matrix(std::span<const OrdinalLabel> actual,
                                 std::span<const OrdinalLabel> predicted);

}  // namespace efpred
