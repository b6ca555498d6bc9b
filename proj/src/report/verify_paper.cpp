#include "efpred/report/verify_paper.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

#include "efpred/eval/metrics.hpp"

namespace efpred {
namespace {

constexpr std::array<const char*, 4> kMetricNames{"precision", "recall", "F-score", "G-score"};

std::array<std::optional<double>, 4> as_array(const ClassMetrics& m) {
  return {m.precision, m.recall, m.f_score, m.g_score};
}

void check_matrix(const PublishedTable& t, const ConfusionMatrix& cm, const std::string& source,
                  bool informational, double tol, std::vector<CellCheck>& out) {
  const auto m = per_class_metrics(cm);
  for (int c = 0; c < kNumClasses; ++c) {
    const auto values = as_array(m.per_class[c]);
    for (std::size_t k = 0; k < 4; ++k) {
      CellCheck cell{t.metrics_label, source, std::string(OrdinalLabel::from_index(c).name()),
                     kMetricNames[k], static_cast<double>(t.per_class_pct[c][k]),
                     values[k] ? *values[k] * 100.0 : NAN, informational, false};
      cell.pass = values[k] && std::abs(cell.computed_pct - cell.published_pct) <= tol + 1e-9;
      out.push_back(cell);
    }
  }
  if (informational) return;
  const auto macro = as_array(m.macro);
  for (std::size_t k = 0; k < 4; ++k) {
    CellCheck cell{t.metrics_label, source, "macro average", kMetricNames[k],
                   static_cast<double>(t.macro_pct[k]), macro[k] ? *macro[k] * 100.0 : NAN, true,
                   false};
    cell.pass = macro[k] && std::abs(cell.computed_pct - cell.published_pct) <= tol + 1e-9;
    out.push_back(cell);
  }
}

}  // namespace

std::size_t VerificationSummary::failures() const {
  std::size_t n = 0;
  for (const auto& c : cells) n += (!c.informational && !c.pass) ? 1 : 0;
  return n;
}

VerificationSummary verify_paper_tables(std::span<const PublishedTable> tables, double tolerance_pp) {
  VerificationSummary s;
  for (const auto& t : tables) {
    const std::string primary = t.matrix_label + (t.transpose ? " (transposed)" : " (as printed)");
    check_matrix(t, t.checked(), primary, false, tolerance_pp, s.cells);
    if (t.transpose) {
      check_matrix(t, t.printed, t.matrix_label + " (as printed)", true, tolerance_pp, s.cells);
    }
    if (t.matrix_label == "Table 1-1") {
      const double acc = 100.0 * static_cast<double>(t.printed.trace()) /
                         static_cast<double>(t.printed.total());
      CellCheck cell{"efficiency", t.matrix_label, "matrix accuracy", "trace/total",
                     static_cast<double>(kPublishedForestEfficiencyPct), acc, false, false};
      cell.pass = std::abs(acc - cell.published_pct) <= tolerance_pp + 1e-9;
      s.cells.push_back(cell);
    }
  }
  s.passed = s.failures() == 0;
  return s;
}

VerificationSummary verify_paper_tables() {
  const auto tables = published_tables();
  return verify_paper_tables(tables);
}

std::string VerificationSummary::format() const {
  std::ostringstream os;
  os << std::left << std::setw(11) << "table" << std::setw(26) << "matrix" << std::setw(16)
     << "row" << std::setw(12) << "metric" << std::right << std::setw(10) << "published"
     << std::setw(10) << "computed" << std::setw(8) << "diff" << "  status\n";
  os << std::fixed << std::setprecision(2);
  for (const auto& c : cells) {
    const char* status = c.pass ? "ok" : (c.informational ? "off (info)" : "FAIL");
    if (c.pass && c.informational) status = "ok (info)";
    os << std::left << std::setw(11) << c.table << std::setw(26) << c.source << std::setw(16)
       << c.row << std::setw(12) << c.metric << std::right << std::setw(10) << c.published_pct
       << std::setw(10) << c.computed_pct << std::setw(8) << (c.computed_pct - c.published_pct)
       << "  " << status << '\n';
  }
  os << (passed ? "PASS" : "FAIL") << ": " << failures() << " gating cell(s) outside tolerance\n";
  return os.str();
}

}  // namespace efpred
