#include "efpred/learners/ordinal_logit.hpp"

#include <cmath>
#include <numeric>

#include "efpred/common/error.hpp"

namespace efpred {
namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double softplus(double x) {
  return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

OrdinalLogitModel::OrdinalLogitModel(std::vector<double> coefficients,
                                     std::array<double, 2> thresholds)
    : coefficients_(std::move(coefficients)), thresholds_(thresholds) {
  if (!(thresholds_[0] < thresholds_[1])) {
    throw Error(ErrorKind::kInvariant, "cutpoints must satisfy theta0 < theta1");
  }
}

std::array<double, kNumClasses> OrdinalLogitModel::probabilities(std::span<const double> row) const {
  if (row.size() != coefficients_.size()) {
    throw Error(ErrorKind::kShape, "row width " + std::to_string(row.size()) + ", model expects " +
                                       std::to_string(coefficients_.size()));
  }
  const double eta = dot(coefficients_, row);
  const double f0 = sigmoid(thresholds_[0] - eta);
  const double f1 = sigmoid(thresholds_[1] - eta);
  return {f0, f1 - f0, 1.0 - f1};
}

OrdinalLabel OrdinalLogitModel::predict(std::span<const double> row) const {
  const auto p = probabilities(row);
  int best = 0;
  for (int k = 1; k < kNumClasses; ++k) {
    if (p[k] > p[best]) best = k;
  }
  return OrdinalLabel::from_index(best);
}

nlohmann::json OrdinalLogitModel::to_json() const {
  return {{"coefficients", coefficients_}, {"thresholds", thresholds_}};
}

OrdinalLogitModel OrdinalLogitModel::from_json(const nlohmann::json& j) {
  return OrdinalLogitModel(j.at("coefficients").get<std::vector<double>>(),
                           j.at("thresholds").get<std::array<double, 2>>());
}

NllResult olr_negative_log_likelihood(const OrdinalLogitModel& model, const Dataset& d) {
  const std::size_t p = model.coefficients().size();
  if (d.cols() != p) throw Error(ErrorKind::kShape, "dataset width differs from coefficient count");
  const auto [t0, t1] = model.thresholds();
  NllResult out;
  out.gradient.assign(p + 2, 0.0);
  double& g_t0 = out.gradient[p];
  double& g_t1 = out.gradient[p + 1];

  for (std::size_t r = 0; r < d.rows(); ++r) {
    const auto x = d.row(r);
    const double eta = dot(model.coefficients(), x);
    const double a0 = t0 - eta;
    const double a1 = t1 - eta;
    double nll = 0.0, d_a0 = 0.0, d_a1 = 0.0;
    switch (d.label(r).index()) {
      case 0:
        nll = softplus(-a0);
        d_a0 = -sigmoid(-a0);
        break;
      case 1: {
        // sigmoid(a1) - sigmoid(a0) = sigmoid(a1) * sigmoid(-a0) * (1 - exp(a0 - a1))
        const double gap = std::expm1(a1 - a0);
        nll = softplus(-a1) + softplus(a0) - std::log(-std::expm1(a0 - a1));
        d_a0 = sigmoid(a0) + 1.0 / gap;
        d_a1 = -sigmoid(-a1) - 1.0 / gap;
        break;
      }
      default:
        nll = softplus(a1);
        d_a1 = sigmoid(a1);
        break;
    }
    if (!std::isfinite(nll) || !std::isfinite(d_a0) || !std::isfinite(d_a1)) {
      throw Error(ErrorKind::kNumeric, "non-finite likelihood term at row " + std::to_string(r));
    }
    out.value += nll;
    g_t0 += d_a0;
    g_t1 += d_a1;
    const double d_eta = -(d_a0 + d_a1);
    for (std::size_t c = 0; c < p; ++c) out.gradient[c] += d_eta * x[c];
  }
  if (!std::isfinite(out.value)) throw Error(ErrorKind::kNumeric, "non-finite likelihood");
  return out;
}

OrdinalLogitModel train_ordinal_logit(const Dataset& d, const OlrParams& params) {
  if (d.empty()) throw Error(ErrorKind::kTraining, "empty training set");
  if (params.max_iter < 0 || !(params.tol > 0)) {
    throw Error(ErrorKind::kParameter, "ordinal logit needs max_iter >= 0 and tol > 0");
  }
  const std::size_t p = d.cols();
  const double inv_n = 1.0 / static_cast<double>(d.rows());

  // w = (beta, theta0, s) with theta1 = theta0 + exp(s)
  std::vector<double> w(p + 2, 0.0);
  w[p] = -1.0;
  w[p + 1] = std::log(2.0);

  auto model_at = [&](const std::vector<double>& v) -> std::optional<OrdinalLogitModel> {
    const double t0 = v[p];
    const double t1 = t0 + std::exp(v[p + 1]);
    if (!std::isfinite(t0) || !std::isfinite(t1) || !(t0 < t1)) return std::nullopt;
    return OrdinalLogitModel(std::vector<double>(v.begin(), v.begin() + p), {t0, t1});
  };
  // objective and reparameterized gradient; nullopt when not evaluable
  auto evaluate = [&](const std::vector<double>& v)
      -> std::optional<std::pair<double, std::vector<double>>> {
    const auto m = model_at(v);
    if (!m) return std::nullopt;
    try {
      auto r = olr_negative_log_likelihood(*m, d);
      std::vector<double> g(p + 2);
      for (std::size_t c = 0; c < p; ++c) g[c] = r.gradient[c] * inv_n;
      g[p] = (r.gradient[p] + r.gradient[p + 1]) * inv_n;
      g[p + 1] = r.gradient[p + 1] * std::exp(v[p + 1]) * inv_n;
      return std::make_pair(r.value * inv_n, std::move(g));
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::kNumeric) return std::nullopt;
      throw;
    }
  };

  auto current = evaluate(w);
  if (!current) throw Error(ErrorKind::kNumeric, "likelihood not finite at the starting point");
  double step = 1.0;
  for (int iter = 0; iter < params.max_iter; ++iter) {
    const auto& [f, g] = *current;
    const double g2 = std::inner_product(g.begin(), g.end(), g.begin(), 0.0);
    if (std::sqrt(g2) < params.tol) break;

    bool accepted = false;
    for (int halving = 0; halving < 60; ++halving) {
      std::vector<double> trial(w);
      for (std::size_t i = 0; i < w.size(); ++i) trial[i] -= step * g[i];
      auto next = evaluate(trial);
      if (next && next->first <= f - 1e-4 * step * g2) {
        w = std::move(trial);
        current = std::move(next);
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    step = std::min(step * 2.0, 1e4);
  }

  auto m = model_at(w);
  if (!m) throw Error(ErrorKind::kInvariant, "cutpoint ordering lost during optimization");
  return *m;
}

}  // namespace efpred
