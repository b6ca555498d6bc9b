#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"

#include "efpred/tabular/dataset.hpp"

namespace efpred {

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

/// Dense n x n RBF Gram matrix over row-major points.
std::vector<double> kernel_matrix(std::span<const double> points, std::size_t width, double gamma);

/// Soft-margin RBF machine separating `positive` (+1) from `negative` (-1).
/// Decision value f(x) = sum_i alpha_i y_i K(x_i, x) + bias; f >= 0 votes
/// for `positive`. A machine trained on a single class is constant and
/// always votes for that class.
struct BinaryMachine {
  OrdinalLabel positive;
  OrdinalLabel negative;
  std::vector<double> support_vectors;  // row-major, width columns
  std::vector<double> alphas;           // in (0, C]
  std::vector<int> signs;               // +1 / -1
  double bias = 0.0;
  std::size_t iterations = 0;
  double kkt_violation = 0.0;
  std::optional<OrdinalLabel> constant_vote;

  double decision(std::span<const double> row, std::size_t width, double gamma) const;
  OrdinalLabel vote(std::span<const double> row, std::size_t width, double gamma) const;

  friend bool operator==(const BinaryMachine&, const BinaryMachine&) = default;
};

struct SvmParams {
  double C = 1.0;
  /// Unset means 1 / p.
  std::optional<double> gamma;
  double tol = 1e-3;
  std::size_t max_iter = 1'000'000;
};

/// SMO with maximal-violating-pair / second-order working-set selection on
/// min 1/2 a'Qa - e'a, 0 <= a <= C, y'a = 0. Throws ErrorKind::kConvergence
/// after max_iter updates, reporting the remaining KKT violation.
BinaryMachine train_binary_machine(std::span<const double> points, std::size_t width,
                                   std::span<const int> signs, double C, double gamma, double tol,
                                   std::size_t max_iter);

/// One-vs-one: machines for (0,1), (0,2), (1,2); plurality vote, tie -> lowest class.
class SvmModel {
 public:
  SvmModel() = default;
  SvmModel(std::array<BinaryMachine, 3> machines, std::size_t width, double gamma, double C);

  OrdinalLabel predict(std::span<const double> row) const;

  const std::array<BinaryMachine, 3>& machines() const noexcept { return machines_; }
  double gamma() const noexcept { return gamma_; }
  double C() const noexcept { return C_; }
  std::size_t width() const noexcept { return width_; }

  nlohmann::json to_json() const;
  static SvmModel from_json(const nlohmann::json& j);

  friend bool operator==(const SvmModel&, const SvmModel&) = default;

 private:
  std::array<BinaryMachine, 3> machines_;
  std::size_t width_ = 0;
  double gamma_ = 1.0;
  double C_ = 1.0;
};

SvmModel train_svm(const Dataset& d, const SvmParams& params = {});

}  // namespace efpred
