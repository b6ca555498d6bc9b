#pragma once

#include <array>
#include <string>
#include <vector>

#include "efpred/eval/confusion.hpp"

namespace efpred {

/// A published confusion matrix paired with its published metrics table.
/// Percentages are whole numbers as printed.
struct PublishedTable {
  std::string matrix_label;   // e.g. "Table 1-1"
  std::string metrics_label;  // e.g. "Table 2-1"
  std::string model;
  ConfusionMatrix printed;
  /// Check the transposed matrix instead of the printed one.
  bool transpose = false;
  /// [class][precision, recall, F, G]
  std::array<std::array<int, 4>, kNumClasses> per_class_pct{};
  std::array<int, 4> macro_pct{};
  int cv_accuracy_pct = 0;

  ConfusionMatrix checked() const { return transpose ? printed.transposed() : printed; }
};

/// Step-1 fixtures (five learners, fourteen features) and the step-2 forest.
std::vector<PublishedTable> published_tables();

/// Headline "efficiency" of the step-1 forest, in percent.
inline constexpr int kPublishedForestEfficiencyPct = 65;

}  // namespace efpred
