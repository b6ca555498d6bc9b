#include "efpred/learners/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "efpred/common/error.hpp"
#include "efpred/learners/forest.hpp"

namespace efpred {
namespace {

constexpr double kTau = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Solution {
  std::vector<double> alpha;
  double bias = 0.0;
  std::size_t iterations = 0;
  double violation = 0.0;
};

Solution smo(const std::vector<double>& K, std::span<const int> y, double C, double tol,
             std::size_t max_iter) {
  const std::size_t n = y.size();
  auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * K[i * n + j]; };
  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);
  auto upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::size_t iter = 0;
  double violation = kInf;
  while (true) {
    // first index: maximal violator in I_up
    double g_max = -kInf;
    std::size_t i = n;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == +1) {
        if (!upper(t) && -G[t] >= g_max) {
          g_max = -G[t];
          i = t;
        }
      } else if (!lower(t) && G[t] >= g_max) {
        g_max = G[t];
        i = t;
      }
    }
    // second index: largest objective decrease in I_low
    double g_max2 = -kInf;
    double best_obj = kInf;
    std::size_t j = n;
    for (std::size_t t = 0; t < n && i < n; ++t) {
      if (y[t] == +1) {
        if (lower(t)) continue;
        const double grad_diff = g_max + G[t];
        g_max2 = std::max(g_max2, G[t]);
        if (grad_diff > 0) {
          double quad = K[i * n + i] + K[t * n + t] - 2.0 * y[i] * Q(i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            j = t;
            best_obj = obj;
          }
        }
      } else {
        if (upper(t)) continue;
        const double grad_diff = g_max - G[t];
        g_max2 = std::max(g_max2, -G[t]);
        if (grad_diff > 0) {
          double quad = K[i * n + i] + K[t * n + t] + 2.0 * y[i] * Q(i, t);
          if (quad <= 0) quad = kTau;
          const double obj = -(grad_diff * grad_diff) / quad;
          if (obj <= best_obj) {
            j = t;
            best_obj = obj;
          }
        }
      }
    }
    violation = g_max + g_max2;
    if (i == n || j == n || violation < tol) break;
    if (iter >= max_iter) {
      throw Error(ErrorKind::kConvergence, "SMO did not converge in " + std::to_string(max_iter) +
                                               " iterations; max KKT violation " +
                                               std::to_string(violation));
    }
    ++iter;

    const double old_i = alpha[i];
    const double old_j = alpha[j];
    if (y[i] != y[j]) {
      double quad = K[i * n + i] + K[j * n + j] + 2.0 * Q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (-G[i] - G[j]) / quad;
      const double diff = alpha[i] - alpha[j];
      alpha[i] += delta;
      alpha[j] += delta;
      if (diff > 0) {
        if (alpha[j] < 0) {
          alpha[j] = 0;
          alpha[i] = diff;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = -diff;
      }
      if (diff > 0) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = C - diff;
        }
      } else if (alpha[j] > C) {
        alpha[j] = C;
        alpha[i] = C + diff;
      }
    } else {
      double quad = K[i * n + i] + K[j * n + j] - 2.0 * Q(i, j);
      if (quad <= 0) quad = kTau;
      const double delta = (G[i] - G[j]) / quad;
      const double sum = alpha[i] + alpha[j];
      alpha[i] -= delta;
      alpha[j] += delta;
      if (sum > C) {
        if (alpha[i] > C) {
          alpha[i] = C;
          alpha[j] = sum - C;
        }
      } else if (alpha[j] < 0) {
        alpha[j] = 0;
        alpha[i] = sum;
      }
      if (sum > C) {
        if (alpha[j] > C) {
          alpha[j] = C;
          alpha[i] = sum - C;
        }
      } else if (alpha[i] < 0) {
        alpha[i] = 0;
        alpha[j] = sum;
      }
    }
    const double di = alpha[i] - old_i;
    const double dj = alpha[j] - old_j;
    for (std::size_t t = 0; t < n; ++t) G[t] += Q(i, t) * di + Q(j, t) * dj;
  }

  // bias: average over free vectors, else midpoint of the feasible interval
  double ub = kInf, lb = -kInf, sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (lower(t)) {
      if (y[t] == +1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;
  return {std::move(alpha), -rho, iter, violation};
}

}  // namespace

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::exp(-gamma * s);
}

std::vector<double> kernel_matrix(std::span<const double> points, std::size_t width, double gamma) {
  const std::size_t n = width == 0 ? 0 : points.size() / width;
  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    K[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double v = rbf_kernel(points.subspan(i * width, width), points.subspan(j * width, width), gamma);
      K[i * n + j] = v;
      K[j * n + i] = v;
    }
  }
  return K;
}

double BinaryMachine::decision(std::span<const double> row, std::size_t width, double gamma) const {
  double f = bias;
  const std::span<const double> sv(support_vectors);
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    f += alphas[i] * signs[i] * rbf_kernel(sv.subspan(i * width, width), row, gamma);
  }
  return f;
}

OrdinalLabel BinaryMachine::vote(std::span<const double> row, std::size_t width, double gamma) const {
  if (constant_vote) return *constant_vote;
  return decision(row, width, gamma) >= 0.0 ? positive : negative;
}

BinaryMachine train_binary_machine(std::span<const double> points, std::size_t width,
                                   std::span<const int> signs, double C, double gamma, double tol,
                                   std::size_t max_iter) {
  if (!(C > 0) || !(gamma > 0) || !(tol > 0)) {
    throw Error(ErrorKind::kParameter, "SVM needs C > 0, gamma > 0 and tol > 0");
  }
  if (width == 0 || points.size() != signs.size() * width || signs.empty()) {
    throw Error(ErrorKind::kShape, "SVM training points and signs disagree");
  }
  for (int s : signs) {
    if (s != 1 && s != -1) throw Error(ErrorKind::kParameter, "SVM signs must be +1 or -1");
  }
  const auto K = kernel_matrix(points, width, gamma);
  auto sol = smo(K, signs, C, tol, max_iter);

  BinaryMachine m;
  m.bias = sol.bias;
  m.iterations = sol.iterations;
  m.kkt_violation = sol.violation;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (sol.alpha[i] <= 0.0) continue;
    m.alphas.push_back(sol.alpha[i]);
    m.signs.push_back(signs[i]);
    m.support_vectors.insert(m.support_vectors.end(), points.begin() + i * width,
                             points.begin() + (i + 1) * width);
  }
  return m;
}

SvmModel::SvmModel(std::array<BinaryMachine, 3> machines, std::size_t width, double gamma, double C)
    : machines_(std::move(machines)), width_(width), gamma_(gamma), C_(C) {}

OrdinalLabel SvmModel::predict(std::span<const double> row) const {
  if (row.size() != width_) {
    throw Error(ErrorKind::kShape, "row width " + std::to_string(row.size()) + ", model expects " +
                                       std::to_string(width_));
  }
  ClassCounts votes{};
  for (const auto& m : machines_) {
    if (!m.constant_vote && m.alphas.empty()) continue;  // no training rows for this pair
    ++votes[m.vote(row, width_, gamma_).index()];
  }
  return plurality(votes);
}

nlohmann::json SvmModel::to_json() const {
  nlohmann::json machines = nlohmann::json::array();
  for (const auto& m : machines_) {
    nlohmann::json j{{"positive", m.positive.index()},
                     {"negative", m.negative.index()},
                     {"support_vectors", m.support_vectors},
                     {"alphas", m.alphas},
                     {"signs", m.signs},
                     {"bias", m.bias},
                     {"iterations", m.iterations},
                     {"kkt_violation", m.kkt_violation}};
    j["constant_vote"] = m.constant_vote ? nlohmann::json(m.constant_vote->index()) : nlohmann::json();
    machines.push_back(std::move(j));
  }
  return {{"width", width_}, {"gamma", gamma_}, {"C", C_}, {"machines", machines}};
}

SvmModel SvmModel::from_json(const nlohmann::json& j) {
  std::array<BinaryMachine, 3> machines;
  const auto& arr = j.at("machines");
  if (arr.size() != 3) throw Error(ErrorKind::kParse, "SVM model needs exactly 3 machines");
  for (std::size_t k = 0; k < 3; ++k) {
    const auto& mj = arr[k];
    auto& m = machines[k];
    m.positive = OrdinalLabel::from_index(mj.at("positive").get<int>());
    m.negative = OrdinalLabel::from_index(mj.at("negative").get<int>());
    mj.at("support_vectors").get_to(m.support_vectors);
    mj.at("alphas").get_to(m.alphas);
    mj.at("signs").get_to(m.signs);
    m.bias = mj.at("bias").get<double>();
    m.iterations = mj.at("iterations").get<std::size_t>();
    m.kkt_violation = mj.at("kkt_violation").get<double>();
    if (!mj.at("constant_vote").is_null()) {
      m.constant_vote = OrdinalLabel::from_index(mj.at("constant_vote").get<int>());
    }
  }
  return SvmModel(std::move(machines), j.at("width").get<std::size_t>(), j.at("gamma").get<double>(),
                  j.at("C").get<double>());
}

SvmModel train_svm(const Dataset& d, const SvmParams& params) {
  if (d.empty() || d.cols() == 0) throw Error(ErrorKind::kTraining, "empty training set");
  const double gamma = params.gamma.value_or(1.0 / static_cast<double>(d.cols()));
  if (!(params.C > 0) || !(gamma > 0)) throw Error(ErrorKind::kParameter, "SVM needs C > 0 and gamma > 0");
  constexpr std::array<std::pair<int, int>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  std::array<BinaryMachine, 3> machines;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const auto [a, b] = pairs[k];
    std::vector<double> pts;
    std::vector<int> signs;
    for (std::size_t r = 0; r < d.rows(); ++r) {
      const int c = d.label(r).index();
      if (c != a && c != b) continue;
      pts.insert(pts.end(), d.row(r).begin(), d.row(r).end());
      signs.push_back(c == a ? +1 : -1);
    }
    const bool has_pos = std::find(signs.begin(), signs.end(), +1) != signs.end();
    const bool has_neg = std::find(signs.begin(), signs.end(), -1) != signs.end();
    BinaryMachine m;
    if (has_pos && has_neg) {
      m = train_binary_machine(pts, d.cols(), signs, params.C, gamma, params.tol, params.max_iter);
    } else if (has_pos) {
      m.constant_vote = OrdinalLabel::from_index(a);
    } else if (has_neg) {
      m.constant_vote = OrdinalLabel::from_index(b);
    }
    m.positive = OrdinalLabel::from_index(a);
    m.negative = OrdinalLabel::from_index(b);
    machines[k] = std::move(m);
  }
  return SvmModel(std::move(machines), d.cols(), gamma, params.C);
}

}  // namespace efpred
