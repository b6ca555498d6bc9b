#include "efpred/tabular/folds.hpp"

#include <algorithm>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"

namespace efpred {

std::vector<std::size_t> FoldPlan::test_rows(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (assignments[r] == fold) out.push_back(r);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::train_rows(int fold) const {
  std::vector<std::size_t> out;
  for (std::size_t r = 0; r < assignments.size(); ++r) {
    if (assignments[r] != fold) out.push_back(r);
  }
  return out;
}

FoldPlan stratified_folds(const Dataset& d, int k, std::uint64_t seed) {
  if (k < 2) throw Error(ErrorKind::kFold, "k must be at least 2, got " + std::to_string(k));
  std::array<std::vector<std::size_t>, kNumClasses> members;
  for (std::size_t r = 0; r < d.rows(); ++r) members[d.label(r).index()].push_back(r);
  for (int c = 0; c < kNumClasses; ++c) {
    const auto n = members[c].size();
    if (n > 0 && n < static_cast<std::size_t>(k)) {
      throw Error(ErrorKind::kFold, "class " + std::to_string(c) + " has " + std::to_string(n) +
                                        " rows, fewer than k=" + std::to_string(k));
    }
  }
  if (d.rows() < static_cast<std::size_t>(k)) {
    throw Error(ErrorKind::kFold, "fewer rows than folds");
  }

  FoldPlan plan{k, std::vector<int>(d.rows(), -1), seed};
  Rng rng(seed);
  int next = 0;
  for (auto& rows : members) {
    std::shuffle(rows.begin(), rows.end(), rng);
    for (std::size_t r : rows) {
      plan.assignments[r] = next;
      next = (next + 1) % k;
    }
  }
  return plan;
}

}  // namespace efpred
