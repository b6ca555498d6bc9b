#pragma once

#include <span>
#include <string>
#include <vector>

#include "efpred/eval/paper_tables.hpp"

namespace efpred {

struct CellCheck {
  std::string table;     // metrics table label
  std::string source;    // matrix label, with orientation
  std::string row;       // class name, "macro average" or "matrix accuracy"
  std::string metric;
  double published_pct = 0.0;
  double computed_pct = 0.0;
  bool informational = false;  // reported but does not affect the outcome
  bool pass = false;
};

struct VerificationSummary {
  std::vector<CellCheck> cells;
  bool passed = false;

  std::size_t failures() const;  // gating cells only
  /// Cell-by-cell diff, one line per cell.
  std::string format() const;
};

/// Recomputes per-class precision/recall/F/G from each matrix (transposed
/// where the fixture says so) and compares with the published percentages.
/// Per-class cells and the step-1 forest matrix accuracy gate the outcome;
/// macro averages and the other orientation of transposed fixtures are
/// informational.
VerificationSummary verify_paper_tables(std::span<const PublishedTable> tables,
                                        double tolerance_pp = 1.0);
VerificationSummary verify_paper_tables();

}  // namespace efpred
