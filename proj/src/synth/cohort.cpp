#include "efpred/synth/cohort.hpp"

#include <cmath>
#include <limits>
#include <random>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"

namespace efpred {
namespace {

Marginal default_marginal(const std::string& name) {
  using S = MarginalShape;
  if (name == "Age") return {S::kUniform, 35, 85};
  if (name == "LAD") return {S::kBernoulli, 0, 1, 0.5};
  if (name == "W.B.C") return {S::kLognormalLike, 4, 20};
  if (name == "R.B.C") return {S::kUniform, 3.5, 6.0};
  if (name == "B.U.N") return {S::kLognormalLike, 7, 60};
  if (name == "HB") return {S::kUniform, 10, 17};
  if (name == "CPK") return {S::kLognormalLike, 50, 3000};
  if (name == "CPK-MB") return {S::kLognormalLike, 5, 300};
  if (name == "PR") return {S::kUniform, 50, 120};
  if (name == "BS") return {S::kLognormalLike, 70, 350};
  if (name == "TimeX12") return {S::kLognormalLike, 5, 180};
  if (name == "TimeX1234") return {S::kLognormalLike, 30, 400};
  if (name == "TimeX23") return {S::kLognormalLike, 10, 200};
  if (name == "TimeX123") return {S::kLognormalLike, 20, 300};
  if (name == "HeartNormSound") return {S::kBernoulli, 0, 1, 0.6};
  if (name == "FmcOnset") return {S::kLognormalLike, 5, 240};
  return {S::kUniform, 0, 1};
}

void validate(const CohortConfig& cfg) {
  const std::size_t p = cfg.schema.width();
  if (cfg.n_patients < 9) throw Error(ErrorKind::kConfig, "cohort needs at least 9 patients");
  if (cfg.marginals.size() != p || cfg.effect_weights.size() != p) {
    throw Error(ErrorKind::kConfig, "cohort needs one marginal and one weight per feature");
  }
  if (!(cfg.thresholds[0] < cfg.thresholds[1])) {
    throw Error(ErrorKind::kConfig, "cohort thresholds must be strictly ordered");
  }
  if (!(cfg.noise_sd >= 0) || !std::isfinite(cfg.noise_sd)) {
    throw Error(ErrorKind::kConfig, "noise_sd must be finite and >= 0");
  }
  for (std::size_t f = 0; f < p; ++f) {
    const auto& m = cfg.marginals[f];
    const auto& name = cfg.schema.column(f).name;
    if (!std::isfinite(cfg.effect_weights[f])) {
      throw Error(ErrorKind::kConfig, "weight for '" + name + "' is not finite");
    }
    if (m.shape == MarginalShape::kBernoulli) {
      if (!(m.p > 0 && m.p < 1)) {
        throw Error(ErrorKind::kConfig, "Bernoulli marginal for '" + name + "' needs 0 < p < 1");
      }
    } else if (!(m.low < m.high) || !std::isfinite(m.low) || !std::isfinite(m.high)) {
      throw Error(ErrorKind::kConfig, "marginal for '" + name + "' has a zero-width range");
    }
  }
}

}  // namespace

CohortConfig CohortConfig::planted(const FeatureSchema& schema, std::size_t n, std::uint64_t seed) {
  CohortConfig cfg;
  cfg.n_patients = n;
  cfg.schema = schema;
  cfg.seed = seed;
  const bool step2_like = !schema.index_of("CPK") || !schema.index_of("B.U.N");
  const std::array<std::string, 2> informative =
      step2_like ? std::array<std::string, 2>{"TimeX1234", "FmcOnset"}
                 : std::array<std::string, 2>{"CPK", "B.U.N"};
  for (const auto& c : schema.columns()) {
    cfg.marginals.push_back(default_marginal(c.name));
    const bool planted = c.name == informative[0] || c.name == informative[1];
    cfg.effect_weights.push_back(planted ? 1.0 : 0.0);
  }
  // a schema lacking both named features: plant the first two columns
  bool any = false;
  for (double w : cfg.effect_weights) any = any || w != 0.0;
  if (!any) {
    for (std::size_t f = 0; f < std::min<std::size_t>(2, schema.width()); ++f) cfg.effect_weights[f] = 1.0;
  }
  return cfg;
}

std::vector<std::string> GenerativeTruth::informative() const {
  std::vector<std::string> out;
  for (std::size_t f = 0; f < features.size(); ++f) {
    if (weights[f] != 0.0) out.push_back(features[f]);
  }
  return out;
}

nlohmann::json GenerativeTruth::to_json() const {
  auto finite_or_null = [](double v) {
    return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(v > 0 ? "inf" : "-inf");
  };
  nlohmann::json w = nlohmann::json::object();
  for (std::size_t f = 0; f < features.size(); ++f) w[features[f]] = weights[f];
  return {{"format", "efpred-truth/1"},
          {"features", features},
          {"weights", w},
          {"informative", informative()},
          {"thresholds", {finite_or_null(thresholds[0]), finite_or_null(thresholds[1])}},
          {"noise_sd", noise_sd},
          {"class_counts", class_counts},
          {"seed", seed}};
}

Cohort generate_cohort(const CohortConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.n_patients;
  const std::size_t p = cfg.schema.width();
  Rng rng(cfg.seed);
  std::vector<double> values(n * p);
  std::normal_distribution<double> std_normal(0.0, 1.0);

  for (std::size_t f = 0; f < p; ++f) {
    const auto& m = cfg.marginals[f];
    for (std::size_t r = 0; r < n; ++r) {
      double v = 0.0;
      switch (m.shape) {
        case MarginalShape::kUniform:
          v = std::uniform_real_distribution<double>(m.low, m.high)(rng);
          break;
        case MarginalShape::kLognormalLike: {
          const double l = std::exp(0.5 * std_normal(rng));
          v = m.low + (m.high - m.low) * (1.0 - std::exp(-l));
          break;
        }
        case MarginalShape::kBernoulli:
          v = std::bernoulli_distribution(m.p)(rng) ? 1.0 : 0.0;
          break;
      }
      values[r * p + f] = v;
    }
  }

  std::vector<double> latent(n, 0.0);
  for (std::size_t f = 0; f < p; ++f) {
    const double w = cfg.effect_weights[f];
    if (w == 0.0) continue;
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += values[r * p + f];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t r = 0; r < n; ++r) ss += std::pow(values[r * p + f] - mean, 2);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (!(sd > 0)) continue;
    for (std::size_t r = 0; r < n; ++r) latent[r] += w * (values[r * p + f] - mean) / sd;
  }
  if (cfg.noise_sd > 0) {
    std::normal_distribution<double> noise(0.0, cfg.noise_sd);
    for (auto& l : latent) l += noise(rng);
  }

  std::vector<OrdinalLabel> labels;
  labels.reserve(n);
  for (double l : latent) {
    const int c = l <= cfg.thresholds[0] ? 0 : (l <= cfg.thresholds[1] ? 1 : 2);
    labels.push_back(OrdinalLabel::from_index(c));
  }

  Dataset data(cfg.schema, std::move(values), std::move(labels));
  GenerativeTruth truth{cfg.schema.names(), cfg.effect_weights, cfg.thresholds, cfg.noise_sd,
                        data.class_counts(), cfg.seed};
  return {std::move(data), std::move(truth)};
}

Dataset inject_missing(const Dataset& d, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error(ErrorKind::kParameter, "missing rate must lie in [0, 1)");
  }
  if (rate == 0.0) return d;
  Rng rng(seed);
  std::bernoulli_distribution blank(rate);
  std::vector<double> values = d.values();
  std::vector<std::uint8_t> missing = d.missing_mask();
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (blank(rng)) {
      values[i] = std::numeric_limits<double>::quiet_NaN();
      missing[i] = 1;
    }
  }
  return Dataset(d.schema(), std::move(values), d.labels(), std::move(missing));
}

}  // namespace efpred
