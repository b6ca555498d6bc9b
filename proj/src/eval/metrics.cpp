#include "efpred/eval/metrics.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "efpred/common/error.hpp"

namespace efpred {
namespace {

std::optional<double> ratio(std::int64_t num, std::int64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

std::optional<double> mean_defined(const std::array<ClassMetrics, kNumClasses>& rows,
                                   std::optional<double> ClassMetrics::*field) {
  double sum = 0.0;
  int n = 0;
  for (const auto& r : rows) {
    if (const auto& v = r.*field) {
      sum += *v;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / n;
}

nlohmann::json opt_json(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json();
}

std::optional<double> opt_from(const nlohmann::json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

nlohmann::json class_json(const ClassMetrics& m) {
  return {{"precision", opt_json(m.precision)},
          {"recall", opt_json(m.recall)},
          {"f_score", opt_json(m.f_score)},
          {"g_score", opt_json(m.g_score)}};
}

ClassMetrics class_from(const nlohmann::json& j) {
  return {opt_from(j.at("precision")), opt_from(j.at("recall")), opt_from(j.at("f_score")),
          opt_from(j.at("g_score"))};
}

std::string pct(const std::optional<double>& v) {
  return v ? std::to_string(display_percent(*v)) + "%" : std::string("n/a");
}

}  // namespace

MetricsTable per_class_metrics(const ConfusionMatrix& cm) {
  if (cm.total() == 0) throw Error(ErrorKind::kDomain, "confusion matrix is all zero");
  MetricsTable t;
  for (int c = 0; c < kNumClasses; ++c) {
    auto& m = t.per_class[c];
    m.precision = ratio(cm.at(c, c), cm.col_sum(c));
    m.recall = ratio(cm.at(c, c), cm.row_sum(c));
    if (m.precision && m.recall) {
      const double p = *m.precision, r = *m.recall;
      m.f_score = p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;
      m.g_score = std::sqrt(p * r);
    }
  }
  t.macro.precision = mean_defined(t.per_class, &ClassMetrics::precision);
  t.macro.recall = mean_defined(t.per_class, &ClassMetrics::recall);
  t.macro.f_score = mean_defined(t.per_class, &ClassMetrics::f_score);
  t.macro.g_score = mean_defined(t.per_class, &ClassMetrics::g_score);
  t.accuracy = static_cast<double>(cm.trace()) / static_cast<double>(cm.total());
  return t;
}

int display_percent(double fraction) {
  return static_cast<int>(std::floor(fraction * 100.0 + 0.5 + 1e-9));
}

nlohmann::json MetricsTable::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& m : per_class) rows.push_back(class_json(m));
  return {{"per_class", rows}, {"macro", class_json(macro)}, {"accuracy", accuracy}};
}

MetricsTable MetricsTable::from_json(const nlohmann::json& j) {
  MetricsTable t;
  const auto& rows = j.at("per_class");
  for (int c = 0; c < kNumClasses; ++c) t.per_class[c] = class_from(rows.at(c));
  t.macro = class_from(j.at("macro"));
  t.accuracy = j.at("accuracy").get<double>();
  return t;
}

std::string format_metrics(const ConfusionMatrix& cm, const MetricsTable& m) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "actual\\pred";
  for (int c = 0; c < kNumClasses; ++c) {
    os << std::right << std::setw(14) << OrdinalLabel::from_index(c).name();
  }
  os << '\n';
  for (int a = 0; a < kNumClasses; ++a) {
    os << std::left << std::setw(16) << OrdinalLabel::from_index(a).name();
    for (int p = 0; p < kNumClasses; ++p) os << std::right << std::setw(14) << cm.at(a, p);
    os << '\n';
  }
  os << '\n'
     << std::left << std::setw(16) << "" << std::right << std::setw(11) << "precision"
     << std::setw(9) << "recall" << std::setw(10) << "F-score" << std::setw(10) << "G-score" << '\n';
  auto line = [&](std::string_view name, const ClassMetrics& cmx) {
    os << std::left << std::setw(16) << name << std::right << std::setw(11) << pct(cmx.precision)
       << std::setw(9) << pct(cmx.recall) << std::setw(10) << pct(cmx.f_score) << std::setw(10)
       << pct(cmx.g_score) << '\n';
  };
  for (int c = 0; c < kNumClasses; ++c) line(OrdinalLabel::from_index(c).name(), m.per_class[c]);
  line("macro average", m.macro);
  os << std::left << std::setw(16) << "matrix accuracy" << std::right << std::setw(11)
     << (std::to_string(display_percent(m.accuracy)) + "%") << '\n';
  return os.str();
}

}  // namespace efpred
