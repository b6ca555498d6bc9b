#pragma once

#include <array>
#include <span>
#include <vector>

#include "json.hpp"

#include "efpred/tabular/dataset.hpp"

namespace efpred {

/// Proportional-odds cumulative logit: P(y <= j | x) = sigmoid(theta_j - beta.x)
/// for j = 0, 1 with theta_0 < theta_1.
class OrdinalLogitModel {
 public:
  OrdinalLogitModel() = default;
  /// Throws ErrorKind::kInvariant unless thresholds[0] < thresholds[1].
  OrdinalLogitModel(std::vector<double> coefficients, std::array<double, 2> thresholds);

  std::array<double, kNumClasses> probabilities(std::span<const double> row) const;
  /// Most probable class; tie -> lowest index.
  OrdinalLabel predict(std::span<const double> row) const;

  const std::vector<double>& coefficients() const noexcept { return coefficients_; }
  const std::array<double, 2>& thresholds() const noexcept { return thresholds_; }

  nlohmann::json to_json() const;
  static OrdinalLogitModel from_json(const nlohmann::json& j);

  friend bool operator==(const OrdinalLogitModel&, const OrdinalLogitModel&) = default;

 private:
  std::vector<double> coefficients_;
  std::array<double, 2> thresholds_{-1.0, 1.0};
};

struct NllResult {
  double value = 0.0;
  /// d/d(beta_0..beta_{p-1}, theta_0, theta_1).
  std::vector<double> gradient;
};

/// Summed negative log-likelihood over d with its analytic gradient.
/// Throws ErrorKind::kNumeric if any intermediate is non-finite.
NllResult olr_negative_log_likelihood(const OrdinalLogitModel& model, const Dataset& d);

struct OlrParams {
  int max_iter = 2000;
  double tol = 1e-6;
};

/// Gradient descent with Armijo backtracking on the mean NLL, from beta = 0,
/// theta = (-1, 1). theta_1 is carried as theta_0 + exp(s) so the ordering
/// holds at every iterate. Stops when the gradient norm (in the
/// reparameterized coordinates) drops below tol or after max_iter steps.
OrdinalLogitModel train_ordinal_logit(const Dataset& d, const OlrParams& params = {});

}  // namespace efpred
