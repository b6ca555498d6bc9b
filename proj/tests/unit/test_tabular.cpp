#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "efpred/common/error.hpp"
#include "efpred/tabular/csv_io.hpp"
#include "efpred/tabular/folds.hpp"
#include "efpred/tabular/preprocess.hpp"
#include "helpers.hpp"

using namespace efpred;
using efpred::testing::make_dataset;

namespace {

std::string step1_header() {
  std::string h;
  for (const auto& n : FeatureSchema::step1().names()) h += n + ",";
  return h + "EF\n";
}

// 14 feature cells; LAD and HeartNormSound are binary
std::string step1_row(const std::string& cpk, int label) {
  return "61,1,9.1,4.8,18," "13.2," + cpk + ",22,88,140,30,240,95,0," + std::to_string(label) + "\n";
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an efpred::Error");
  return ErrorKind::kIo;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("ordinal labels are ordered and range checked") {
  CHECK(OrdinalLabel::from_index(0) < OrdinalLabel::from_index(2));
  CHECK(OrdinalLabel::from_index(1).name() == "Below normal");
  CHECK(kind_of([] { OrdinalLabel::from_index(3); }) == ErrorKind::kLabel);
  CHECK(kind_of([] { OrdinalLabel::from_index(-1); }) == ErrorKind::kLabel);
}

TEST_CASE("bundled schemas") {
  const auto s1 = FeatureSchema::step1();
  CHECK(s1.width() == 14);
  CHECK(s1.column(*s1.index_of("LAD")).kind == ColumnKind::kBinary);
  CHECK(s1.column(*s1.index_of("CPK")).kind == ColumnKind::kContinuous);
  const auto s2 = FeatureSchema::step2();
  CHECK(s2.names() == std::vector<std::string>{"TimeX12", "TimeX1234", "TimeX23", "TimeX123",
                                               "HeartNormSound", "FmcOnset"});
  CHECK(FeatureSchema::resolve("step2") == s2);
  CHECK(FeatureSchema::from_json(s1.to_json()) == s1);

  CHECK(kind_of([] { FeatureSchema({{"a"}, {"a"}}, "y"); }) == ErrorKind::kSchema);
  CHECK(kind_of([] { FeatureSchema({{"a"}, {"y"}}, "y"); }) == ErrorKind::kSchema);
}

TEST_CASE("load: complete rows, a hole, a bad label") {
  const auto schema = FeatureSchema::step1();
  {
    std::istringstream in(step1_header() + step1_row("410", 0) + step1_row("1200", 1) +
                          step1_row("95", 2));
    const auto d = parse_dataset(in, schema);
    CHECK(d.rows() == 3);
    CHECK_FALSE(d.has_missing());
    CHECK(d.label(2).index() == 2);
  }
  {
    std::istringstream in(step1_header() + step1_row("410", 0) + step1_row("", 1) +
                          step1_row("95", 2));
    const auto d = parse_dataset(in, schema);
    const auto cpk = *schema.index_of("CPK");
    int holes = 0;
    for (std::size_t r = 0; r < d.rows(); ++r)
      for (std::size_t c = 0; c < d.cols(); ++c) holes += d.is_missing(r, c);
    CHECK(holes == 1);
    CHECK(d.is_missing(1, cpk));
  }
  {
    std::istringstream in(step1_header() + step1_row("410", 0) + step1_row("95", 3));
    try {
      parse_dataset(in, schema);
      FAIL("label 3 accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kLabel);
      CHECK(std::string(e.what()).find("row 2") != std::string::npos);
    }
  }
}

TEST_CASE("load: schema and parse errors name the culprit") {
  const auto schema = FeatureSchema::step1();
  auto header = step1_header();
  {
    auto h = header;
    h.replace(h.find("CPK-MB"), 6, "CKMB");
    std::istringstream in(h + step1_row("410", 0));
    try {
      parse_dataset(in, schema);
      FAIL("renamed column accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kSchema);
      CHECK(std::string(e.what()).find("CKMB") != std::string::npos);
    }
  }
  {
    std::istringstream in(header + step1_row("lots", 0));
    try {
      parse_dataset(in, schema);
      FAIL("text accepted");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::kParse);
      CHECK(std::string(e.what()).find("CPK") != std::string::npos);
    }
  }
  CHECK(kind_of([&] { load_dataset("/nonexistent/dir/x.csv", schema); }) == ErrorKind::kIo);
}

TEST_CASE("columns can appear in any order") {
  auto schema = efpred::testing::plain_schema(2);
  std::istringstream in("y,x1,x0\n2,10,20\n0,11,21\n");
  const auto d = parse_dataset(in, schema);
  CHECK(d.at(0, 0) == 20);
  CHECK(d.at(0, 1) == 10);
  CHECK(d.label(0).index() == 2);
}

TEST_CASE("write then load reproduces every value bit for bit") {
  auto d = efpred::testing::random_dataset(40, 5, 11);
  std::ostringstream out;
  write_dataset(out, d);
  std::istringstream in(out.str());
  const auto back = parse_dataset(in, d.schema());
  REQUIRE(back.rows() == d.rows());
  for (std::size_t i = 0; i < d.values().size(); ++i) CHECK(same_bits(back.values()[i], d.values()[i]));
  CHECK(back.labels() == d.labels());
}

TEST_CASE("impute: median for continuous, mode for binary") {
  FeatureSchema schema({{"a", ColumnKind::kContinuous}, {"b", ColumnKind::kBinary}}, "y");
  const double nan = std::nan("");
  Dataset d(schema, {1, 1, nan, 1, 3, 0, 5, nan}, efpred::testing::labels_of({0, 1, 2, 0}),
            {0, 0, 1, 0, 0, 0, 0, 1});
  const auto out = impute_missing(d);
  CHECK_FALSE(out.has_missing());
  // a = [1, missing, 3, 5] → median of {1, 3, 5}
  CHECK(out.at(1, 0) == 3.0);
  // b = [1, 1, 0, missing] → mode of {1, 1, 0}
  CHECK(out.at(3, 1) == 1.0);
  CHECK(out.at(0, 0) == 1.0);
  CHECK(out.at(2, 1) == 0.0);
  CHECK(impute_missing(out).values() == out.values());
}

TEST_CASE("impute examples") {
  const double nan = std::nan("");
  {
    Dataset d(efpred::testing::plain_schema(1), {1, nan, 3}, efpred::testing::labels_of({0, 1, 2}),
              {0, 1, 0});
    CHECK(impute_missing(d).column(0) == std::vector<double>{1, 2, 3});
  }
  {
    FeatureSchema s({{"b", ColumnKind::kBinary}}, "y");
    Dataset d(s, {1, 1, 0, nan}, efpred::testing::labels_of({0, 1, 2, 0}), {0, 0, 0, 1});
    CHECK(impute_missing(d).column(0) == std::vector<double>{1, 1, 0, 1});
  }
  {
    FeatureSchema s({{"b", ColumnKind::kBinary}}, "y");
    Dataset d(s, {1, 0, nan}, efpred::testing::labels_of({0, 1, 2}), {0, 0, 1});
    CHECK(impute_missing(d).at(2, 0) == 0.0);
  }
  {
    auto d = make_dataset(1, {4, 5, 6}, {0, 1, 2});
    CHECK(impute_missing(d).values() == d.values());
  }
  {
    Dataset d(efpred::testing::plain_schema(1), {nan, nan}, efpred::testing::labels_of({0, 1}),
              {1, 1});
    CHECK(kind_of([&] { impute_missing(d); }) == ErrorKind::kImputation);
  }
}

TEST_CASE("upsample: balanced input is unchanged") {
  std::vector<double> v;
  std::vector<int> y;
  for (int i = 0; i < 126; ++i) {
    v.push_back(i);
    y.push_back(i % 3);
  }
  const auto d = make_dataset(1, v, y);
  const auto out = upsample_balance(d, 1);
  CHECK(out.rows() == 126);
  CHECK(out.values() == d.values());
}

TEST_CASE("upsample: pad to the majority from the same class only") {
  const auto d = make_dataset(1, {0, 1, 2, 3, 4, 10, 11, 12, 20, 21}, {0, 0, 0, 0, 0, 1, 1, 1, 2, 2});
  const auto out = upsample_balance(d, 99);
  CHECK(out.rows() == 15);
  CHECK(out.class_counts() == ClassCounts{5, 5, 5});
  // originals kept, in order, at the front
  for (std::size_t r = 0; r < d.rows(); ++r) CHECK(out.at(r, 0) == d.at(r, 0));
  for (std::size_t r = 0; r < out.rows(); ++r) {
    const int c = out.label(r).index();
    const double x = out.at(r, 0);
    CHECK(x >= 10.0 * c);
    CHECK(x < 10.0 * c + 5);
  }
  const auto again = upsample_balance(d, 99);
  CHECK(again.values() == out.values());
  CHECK(again.labels() == out.labels());

  CHECK(kind_of([] { upsample_balance(make_dataset(1, {1, 2}, {0, 1}), 1); }) == ErrorKind::kBalance);
}

TEST_CASE("upsample: 105 rows with a majority of 42 grow to 126") {
  std::vector<double> v;
  std::vector<int> y;
  const int counts[3] = {42, 38, 25};
  for (int c = 0; c < 3; ++c)
    for (int i = 0; i < counts[c]; ++i) {
      v.push_back(c * 100 + i);
      y.push_back(c);
    }
  const auto out = upsample_balance(make_dataset(1, v, y), 5);
  CHECK(out.rows() == 126);
  CHECK(out.class_counts() == ClassCounts{42, 42, 42});
}

TEST_CASE("standardize with the sample standard deviation") {
  const auto d = make_dataset(1, {2, 4}, {0, 1});
  const auto s = standardize(d);
  // oracle: mean 3, sd = sqrt(((2-3)^2 + (4-3)^2) / (2-1)) = sqrt(2)
  const double z = 1.0 / std::sqrt(2.0);
  CHECK(s.params.means[0] == doctest::Approx(3.0));
  CHECK(s.params.stddevs[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(s.data.at(0, 0) == doctest::Approx(-z).epsilon(1e-12));
  CHECK(s.data.at(1, 0) == doctest::Approx(z).epsilon(1e-12));

  const auto twice = standardize(s.data);
  CHECK(std::abs(twice.params.means[0]) < 1e-12);

  CHECK(kind_of([] { standardize(make_dataset(1, {7, 7, 7}, {0, 1, 2})); }) == ErrorKind::kScaling);
}

TEST_CASE("standardize leaves binary columns and reapplies to held-out rows") {
  FeatureSchema schema({{"a", ColumnKind::kContinuous}, {"b", ColumnKind::kBinary}}, "y");
  Dataset d(schema, {1, 0, 2, 1, 3, 1, 6, 0}, efpred::testing::labels_of({0, 1, 2, 0}));
  const auto s = standardize(d);
  CHECK(s.data.column(1) == d.column(1));
  CHECK(s.params.columns == std::vector<std::size_t>{0});
  const std::vector<double> held{3.0, 1.0};
  const auto z = s.params.apply_row(held);
  CHECK(z[0] == doctest::Approx((3.0 - s.params.means[0]) / s.params.stddevs[0]));
  CHECK(z[1] == 1.0);
  CHECK(ScalingParams::from_json(s.params.to_json()) == s.params);
}

TEST_CASE("stratified folds: 126 balanced rows into 10") {
  std::vector<double> v(126);
  std::vector<int> y(126);
  for (int i = 0; i < 126; ++i) {
    v[i] = i;
    y[i] = i % 3;
  }
  const auto d = make_dataset(1, v, y);
  const auto plan = stratified_folds(d, 10, 2024);
  std::multiset<std::size_t> all;
  for (int f = 0; f < 10; ++f) {
    const auto rows = plan.test_rows(f);
    CHECK((rows.size() == 12 || rows.size() == 13));
    int per[3] = {0, 0, 0};
    for (auto r : rows) ++per[d.label(r).index()];
    for (int c = 0; c < 3; ++c) CHECK((per[c] == 4 || per[c] == 5));
    all.insert(rows.begin(), rows.end());
    CHECK(plan.train_rows(f).size() + rows.size() == 126);
  }
  CHECK(all.size() == 126);
  CHECK(std::set<std::size_t>(all.begin(), all.end()).size() == 126);
  CHECK(stratified_folds(d, 10, 2024) == plan);
  CHECK_FALSE(stratified_folds(d, 10, 2025) == plan);
}

TEST_CASE("stratified folds: forced split and errors") {
  const auto d = make_dataset(1, {0, 1, 2, 3, 4, 5}, {0, 0, 1, 1, 2, 2});
  const auto plan = stratified_folds(d, 2, 3);
  for (int f = 0; f < 2; ++f) {
    const auto rows = plan.test_rows(f);
    REQUIRE(rows.size() == 3);
    std::set<int> classes;
    for (auto r : rows) classes.insert(d.label(r).index());
    CHECK(classes.size() == 3);
  }
  CHECK(kind_of([&] { stratified_folds(d, 3, 3); }) == ErrorKind::kFold);
  CHECK(kind_of([&] { stratified_folds(d, 1, 3); }) == ErrorKind::kFold);
}

TEST_CASE("fold union covers every row for many k and seeds") {
  const auto d = efpred::testing::random_dataset(61, 1, 4);
  for (int k = 2; k <= 10; ++k) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto plan = stratified_folds(d, k, seed);
      std::vector<int> seen(d.rows(), 0);
      for (int f = 0; f < k; ++f) {
        const auto rows = plan.test_rows(f);
        CHECK_FALSE(rows.empty());
        for (auto r : rows) ++seen[r];
      }
      CHECK(std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; }));
      // per-class counts across folds differ by at most one
      for (int c = 0; c < 3; ++c) {
        std::vector<int> per(k, 0);
        for (std::size_t r = 0; r < d.rows(); ++r)
          if (d.label(r).index() == c) ++per[plan.assignments[r]];
        const auto [lo, hi] = std::minmax_element(per.begin(), per.end());
        CHECK(*hi - *lo <= 1);
      }
    }
  }
}
