#include "efpred/eval/paper_tables.hpp"

namespace efpred {

std::vector<PublishedTable> published_tables() {
  using C = ConfusionMatrix::Counts;
  std::vector<PublishedTable> t;
  t.push_back({"Table 1-1", "Table 2-1", "random_forest",
               ConfusionMatrix(C{{{28, 10, 4}, {5, 26, 11}, {8, 7, 27}}}), false,
               {{{68, 66, 67, 67}, {60, 61, 61, 61}, {64, 64, 64, 64}}}, {65, 64, 65, 63}, 76});
  t.push_back({"Table 1-2", "Table 2-2", "svm",
               ConfusionMatrix(C{{{10, 29, 3}, {3, 37, 2}, {2, 20, 20}}}), false,
               {{{66, 23, 35, 39}, {43, 88, 57, 61}, {80, 47, 60, 62}}}, {63, 53, 50, 54}, 68});
  t.push_back({"Table 1-3", "Table 2-3", "decision_tree",
               ConfusionMatrix(C{{{23, 8, 11}, {8, 22, 12}, {3, 11, 28}}}), false,
               {{{67, 54, 60, 61}, {53, 52, 53, 53}, {54, 66, 60, 60}}}, {58, 57, 58, 57}, 72});
  t.push_back({"Table 1-4", "Table 2-5", "knn",
               ConfusionMatrix(C{{{20, 18, 4}, {6, 34, 2}, {5, 13, 24}}}), false,
               {{{64, 47, 54, 55}, {52, 80, 63, 65}, {80, 58, 66, 67}}}, {64, 62, 61, 63}, 74});
  // Printed row sums are (34, 41, 51) against column sums (42, 42, 42).
  t.push_back({"Table 1-5", "Table 2-4", "ordinal_logit",
               ConfusionMatrix(C{{{23, 8, 3}, {8, 22, 11}, {11, 12, 28}}}), true,
               {{{54, 67, 60, 61}, {52, 53, 53, 53}, {66, 54, 60, 60}}}, {57, 58, 59, 56}, 71});
  t.push_back({"Table 9", "Table 10", "random_forest (step 2)",
               ConfusionMatrix(C{{{33, 5, 4}, {10, 18, 14}, {8, 13, 21}}}), false,
               {{{64, 78, 70, 71}, {50, 42, 46, 46}, {53, 50, 51, 51}}}, {56, 57, 56, 56}, 70});
  return t;
}

}  // namespace efpred
