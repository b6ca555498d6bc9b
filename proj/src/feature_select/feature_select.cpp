#include "efpred/feature_select/feature_select.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "efpred/common/error.hpp"
#include "efpred/eval/cross_validate.hpp"
#include "efpred/tabular/csv_io.hpp"
#include "efpred/tabular/folds.hpp"

namespace efpred {

double rmse(std::span<const double> predicted, std::span<const double> actual) {
  if (predicted.size() != actual.size()) {
    throw Error(ErrorKind::kShape, "rmse: " + std::to_string(predicted.size()) + " predictions vs " +
                                       std::to_string(actual.size()) + " actuals");
  }
  if (predicted.empty()) throw Error(ErrorKind::kShape, "rmse of empty vectors");
  double ss = 0.0;
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const double e = predicted[i] - actual[i];
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(predicted.size()));
}

std::vector<std::string> ImportanceRanking::top(std::size_t n) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < std::min(n, entries.size()); ++i) out.push_back(entries[i].first);
  return out;
}

nlohmann::json ImportanceRanking::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [name, score] : entries) arr.push_back({{"feature", name}, {"importance", score}});
  return arr;
}

ImportanceRanking ImportanceRanking::from_json(const nlohmann::json& j) {
  ImportanceRanking r;
  for (const auto& e : j) {
    r.entries.emplace_back(e.at("feature").get<std::string>(), e.at("importance").get<double>());
  }
  return r;
}

ImportanceRanking rank_features(const Dataset& d, const ForestParams& params, std::uint64_t seed) {
  const auto forest = train_forest(d, params, seed);
  ImportanceRanking r;
  for (std::size_t f = 0; f < d.cols(); ++f) {
    r.entries.emplace_back(d.schema().column(f).name, forest.gini_importance()[f]);
  }
  std::sort(r.entries.begin(), r.entries.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return r;
}

double cv_rmse(const Dataset& d, const ForestParams& params, int k, std::uint64_t seed) {
  ForestParams p = params;
  // mtry follows the subset width unless pinned
  if (p.mtry && *p.mtry > static_cast<int>(d.cols())) p.mtry = static_cast<int>(d.cols());
  const auto plan = stratified_folds(d, k, seed);
  const auto cv = cross_validate(d, ModelSpec{"random_forest", p, seed}, plan);
  std::vector<double> predicted, actual;
  for (std::size_t r = 0; r < d.rows(); ++r) {
    predicted.push_back(cv.oof_predictions[r].index());
    actual.push_back(d.label(r).index());
  }
  return rmse(predicted, actual);
}

nlohmann::json RfeResult::to_json() const {
  nlohmann::json curve_j = nlohmann::json::array();
  for (const auto& pt : curve) {
    curve_j.push_back({{"size", pt.size},
                       {"rmse", pt.rmse},
                       {"features", pt.features},
                       {"ranking", pt.ranking.to_json()}});
  }
  return {{"curve", curve_j}, {"selected", selected}, {"selected_size", selected_size}};
}

RfeResult RfeResult::from_json(const nlohmann::json& j) {
  RfeResult r;
  for (const auto& pj : j.at("curve")) {
    r.curve.push_back({pj.at("size").get<std::size_t>(), pj.at("rmse").get<double>(),
                       pj.at("features").get<std::vector<std::string>>(),
                       ImportanceRanking::from_json(pj.at("ranking"))});
  }
  j.at("selected").get_to(r.selected);
  j.at("selected_size").get_to(r.selected_size);
  return r;
}

std::string RfeResult::curve_csv() const {
  std::ostringstream os;
  os << "size,rmse\n";
  for (const auto& pt : curve) os << pt.size << ',' << format_number(pt.rmse) << '\n';
  return os.str();
}

RfeResult run_rfe(const Dataset& d, const std::vector<std::size_t>& sizes, int k,
                  std::uint64_t seed, const ForestParams& params) {
  if (sizes.empty()) throw Error(ErrorKind::kParameter, "RFE needs at least one subset size");
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    if (sizes[i] < 1 || sizes[i] > d.cols()) {
      throw Error(ErrorKind::kParameter, "RFE size " + std::to_string(sizes[i]) + " outside [1, " +
                                             std::to_string(d.cols()) + "]");
    }
    if (i > 0 && sizes[i] >= sizes[i - 1]) {
      throw Error(ErrorKind::kParameter, "RFE sizes must be strictly descending");
    }
  }

  RfeResult result;
  std::vector<std::string> current = d.schema().names();
  // a fixed mtry is clipped to the subset width as features drop out
  auto clipped = [&](std::size_t width) {
    ForestParams p = params;
    if (p.mtry && *p.mtry > static_cast<int>(width)) p.mtry = static_cast<int>(width);
    return p;
  };
  auto fit_ranking = [&](const std::vector<std::string>& features) {
    return rank_features(d.select_features(features), clipped(features.size()), seed);
  };
  ImportanceRanking ranking = fit_ranking(current);

  for (std::size_t size : sizes) {
    if (current.size() > size) {
      const auto keep = ranking.top(size);
      std::vector<std::string> next;
      for (const auto& name : current) {
        if (std::find(keep.begin(), keep.end(), name) != keep.end()) next.push_back(name);
      }
      current = std::move(next);
      ranking = fit_ranking(current);
    }
    const double score = cv_rmse(d.select_features(current), clipped(current.size()), k, seed);
    result.curve.push_back({size, score, current, ranking});
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < result.curve.size(); ++i) {
    // later points are smaller subsets, so <= prefers fewer features on ties
    if (result.curve[i].rmse <= result.curve[best].rmse) best = i;
  }
  result.selected = result.curve[best].features;
  result.selected_size = result.curve[best].size;
  return result;
}

}  // namespace efpred
