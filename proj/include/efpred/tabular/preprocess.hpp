#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "json.hpp"

#include "efpred/tabular/dataset.hpp"

namespace efpred {

enum class ImputePolicy { kMedianMode };

/// Continuous holes get the column median of observed cells; binary holes get
/// the column mode (tie -> 0). Observed cells are never touched.
Dataset impute_missing(const Dataset& d, ImputePolicy policy = ImputePolicy::kMedianMode);

/// Pads each minority class by resampling its own rows with replacement until
/// every class matches the majority count. Original rows come first, in order.
Dataset upsample_balance(const Dataset& d, std::uint64_t seed);

/// Per-column affine map for continuous columns; binary columns pass through.
struct ScalingParams {
  std::size_t width = 0;
  std::vector<std::size_t> columns;
  std::vector<double> means;
  std::vector<double> stddevs;

  std::vector<double> apply_row(std::span<const double> row) const;
  Dataset apply(const Dataset& d) const;

  nlohmann::json to_json() const;
  static ScalingParams from_json(const nlohmann::json& j);

  friend bool operator==(const ScalingParams&, const ScalingParams&) = default;
};

struct Standardized {
  Dataset data;
  ScalingParams params;
};

/// Zero mean, unit sample (n-1) standard deviation for every continuous column.
Standardized standardize(const Dataset& d);

}  // namespace efpred
