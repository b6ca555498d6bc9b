#include "efpred/tabular/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"

namespace efpred {
namespace {

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double mode(const std::vector<double>& v) {
  std::map<double, std::size_t> freq;
  for (double x : v) ++freq[x];
  double best = 0.0;
  std::size_t best_count = 0;
  // ascending key order, so ties keep the smaller value (0 for binary)
  for (const auto& [value, count] : freq) {
    if (count > best_count) {
      best = value;
      best_count = count;
    }
  }
  return best;
}

}  // namespace

Dataset impute_missing(const Dataset& d, ImputePolicy /*policy*/) {
  if (!d.has_missing()) return d;
  std::vector<double> values = d.values();
  const std::size_t w = d.cols();
  for (std::size_t c = 0; c < w; ++c) {
    std::vector<double> observed;
    bool any_missing = false;
    for (std::size_t r = 0; r < d.rows(); ++r) {
      if (d.is_missing(r, c)) {
        any_missing = true;
      } else {
        observed.push_back(d.at(r, c));
      }
    }
    if (!any_missing) continue;
    const auto& col = d.schema().column(c);
    if (observed.empty()) {
      throw Error(ErrorKind::kImputation, "column '" + col.name + "' has no observed values");
    }
    const double fill = col.kind == ColumnKind::kBinary ? mode(observed) : median(observed);
    for (std::size_t r = 0; r < d.rows(); ++r) {
      if (d.is_missing(r, c)) values[r * w + c] = fill;
    }
  }
  return Dataset(d.schema(), std::move(values), d.labels());
}

Dataset upsample_balance(const Dataset& d, std::uint64_t seed) {
  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t r = 0; r < d.rows(); ++r) members[d.label(r).index()].push_back(r);
  std::size_t majority = 0;
  for (int c = 0; c < kNumClasses; ++c) {
    if (members[c].empty()) {
      throw Error(ErrorKind::kBalance,
                  "class " + std::to_string(c) + " (" +
                      std::string(OrdinalLabel::from_index(c).name()) + ") has no rows");
    }
    majority = std::max(majority, members[c].size());
  }
  std::vector<std::size_t> order(d.rows());
  for (std::size_t r = 0; r < d.rows(); ++r) order[r] = r;
  Rng rng(seed);
  for (int c = 0; c < kNumClasses; ++c) {
    std::uniform_int_distribution<std::size_t> pick(0, members[c].size() - 1);
    for (std::size_t k = members[c].size(); k < majority; ++k) order.push_back(members[c][pick(rng)]);
  }
  return d.subset_rows(order);
}

std::vector<double> ScalingParams::apply_row(std::span<const double> row) const {
  if (row.size() != width) {
    throw Error(ErrorKind::kShape, "row width " + std::to_string(row.size()) + ", expected " +
                                       std::to_string(width));
  }
  std::vector<double> out(row.begin(), row.end());
  for (std::size_t i = 0; i < columns.size(); ++i) {
    out[columns[i]] = (out[columns[i]] - means[i]) / stddevs[i];
  }
  return out;
}

Dataset ScalingParams::apply(const Dataset& d) const {
  std::vector<double> values;
  values.reserve(d.values().size());
  for (std::size_t r = 0; r < d.rows(); ++r) {
    const auto scaled = apply_row(d.row(r));
    values.insert(values.end(), scaled.begin(), scaled.end());
  }
  return Dataset(d.schema(), std::move(values), d.labels(), d.missing_mask());
}

nlohmann::json ScalingParams::to_json() const {
  return {{"width", width}, {"columns", columns}, {"means", means}, {"stddevs", stddevs}};
}

ScalingParams ScalingParams::from_json(const nlohmann::json& j) {
  ScalingParams p;
  j.at("width").get_to(p.width);
  j.at("columns").get_to(p.columns);
  j.at("means").get_to(p.means);
  j.at("stddevs").get_to(p.stddevs);
  if (p.means.size() != p.columns.size() || p.stddevs.size() != p.columns.size()) {
    throw Error(ErrorKind::kParse, "scaling parameters have inconsistent lengths");
  }
  return p;
}

Standardized standardize(const Dataset& d) {
  if (d.has_missing()) throw Error(ErrorKind::kScaling, "dataset has missing cells; impute first");
  ScalingParams p;
  p.width = d.cols();
  const std::size_t n = d.rows();
  for (std::size_t c = 0; c < d.cols(); ++c) {
    const auto& col = d.schema().column(c);
    if (col.kind != ColumnKind::kContinuous) continue;
    if (n < 2) throw Error(ErrorKind::kScaling, "column '" + col.name + "' needs at least 2 rows");
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += d.at(r, c);
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += (d.at(r, c) - mean) * (d.at(r, c) - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0.0) || !std::isfinite(sd)) {
      throw Error(ErrorKind::kScaling, "column '" + col.name + "' has zero variance");
    }
    p.columns.push_back(c);
    p.means.push_back(mean);
    p.stddevs.push_back(sd);
  }
  return {p.apply(d), std::move(p)};
}

}  // namespace efpred
