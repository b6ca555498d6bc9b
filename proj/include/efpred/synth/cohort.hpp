#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "efpred/tabular/dataset.hpp"

namespace efpred {

enum class MarginalShape { kUniform, kLognormalLike, kBernoulli };

/// Feature marginal. Uniform draws from [low, high). Lognormal-like maps
/// L ~ LogNormal(0, 0.5) to low + (high - low) * (1 - exp(-L)), a right-skewed
/// draw inside the range. Bernoulli yields 1 with probability p.
struct Marginal {
  MarginalShape shape = MarginalShape::kUniform;
  double low = 0.0;
  double high = 1.0;
  double p = 0.5;
};

/// Latent-severity cohort: latent = sum_f w_f * z_f + N(0, noise_sd), where
/// z_f is feature f standardized over the cohort. label = 0 if latent <=
/// thresholds[0], 1 if <= thresholds[1], else 2.
struct CohortConfig {
  std::size_t n_patients = 300;
  FeatureSchema schema = FeatureSchema::step1();
  std::vector<Marginal> marginals;
  std::vector<double> effect_weights;
  std::array<double, 2> thresholds{-0.38, 1.01};
  double noise_sd = 0.5;
  std::uint64_t seed = 0;

  /// Planted default: CPK and B.U.N (step1) or TimeX1234 and FmcOnset (step2)
  /// carry unit weights, everything else is noise. Thresholds put roughly
  /// 40/35/25 percent of patients in classes 0/1/2.
  static CohortConfig planted(const FeatureSchema& schema, std::size_t n, std::uint64_t seed);
};

struct GenerativeTruth {
  std::vector<std::string> features;
  std::vector<double> weights;
  std::array<double, 2> thresholds{};
  double noise_sd = 0.0;
  ClassCounts class_counts{};
  std::uint64_t seed = 0;

  /// Names of features with nonzero weight.
  std::vector<std::string> informative() const;
  nlohmann::json to_json() const;
};

struct Cohort {
  Dataset data;
  GenerativeTruth truth;
};

/// Throws ErrorKind::kConfig on an invalid config (n < 9, unordered
/// thresholds, zero-width range, degenerate Bernoulli, size mismatches).
Cohort generate_cohort(const CohortConfig& cfg);

/// Blanks each feature cell independently with probability `rate`; labels are
/// kept. Throws ErrorKind::kParameter unless 0 <= rate < 1.
Dataset inject_missing(const Dataset& d, double rate, std::uint64_t seed);

}  // namespace efpred
