#pragma once

#include <cstdint>
#include <vector>

#include "efpred/tabular/dataset.hpp"

namespace efpred {

/// Per-row fold assignment for k-fold cross-validation.
struct FoldPlan {
  int k = 0;
  std::vector<int> assignments;
  std::uint64_t seed = 0;

  std::vector<std::size_t> test_rows(int fold) const;
  std::vector<std::size_t> train_rows(int fold) const;

  friend bool operator==(const FoldPlan&, const FoldPlan&) = default;
};

/// Seeded shuffle within each class, then round-robin dealing. The dealing
/// position carries over from one class to the next so fold sizes stay within
/// one of each other. Classes with no rows are skipped; a class with fewer than
/// k rows is an error.
FoldPlan stratified_folds(const Dataset& d, int k, std::uint64_t seed);

}  // namespace efpred
