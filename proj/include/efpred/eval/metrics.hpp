#pragma once

#include <array>
#include <optional>
#include <string>

#include "json.hpp"

#include "efpred/eval/confusion.hpp"

namespace efpred {

/// A metric is absent when its denominator is zero.
struct ClassMetrics {
  std::optional<double> precision;
  std::optional<double> recall;
  /// Harmonic mean of precision and recall.
  std::optional<double> f_score;
  /// Geometric mean of precision and recall.
  std::optional<double> g_score;

  friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsTable {
  std::array<ClassMetrics, kNumClasses> per_class;
  /// Means over the classes where the metric is defined.
  ClassMetrics macro;
  /// trace / total of the matrix.
  double accuracy = 0.0;

  nlohmann::json to_json() const;
  static MetricsTable from_json(const nlohmann::json& j);

  friend bool operator==(const MetricsTable&, const MetricsTable&) = default;
};

/// precision_c = cm[c][c] / colsum_c, recall_c = cm[c][c] / rowsum_c.
/// Throws ErrorKind::kDomain for an all-zero matrix.
MetricsTable per_class_metrics(const ConfusionMatrix& cm);

/// Whole percent, round half up (0.645 -> 65).
int display_percent(double fraction);

/// Aligned plain-text rendering of a metrics table with its matrix.
std::string format_metrics(const ConfusionMatrix& cm, const MetricsTable& m);

}  // namespace efpred
