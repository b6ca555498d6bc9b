#include "efpred/eval/cross_validate.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"
#include "efpred/eval/metrics.hpp"

namespace efpred {

nlohmann::json CvResult::to_json() const {
  std::vector<int> oof;
  for (auto l : oof_predictions) oof.push_back(l.index());
  return {{"model_id", model_id},
          {"seed", seed},
          {"fold_accuracies", fold_accuracies},
          {"mean_accuracy", mean_accuracy},
          {"oof_predictions", oof},
          {"pooled_confusion", pooled.to_json()}};
}

CvResult CvResult::from_json(const nlohmann::json& j) {
  CvResult r;
  j.at("model_id").get_to(r.model_id);
  j.at("seed").get_to(r.seed);
  j.at("fold_accuracies").get_to(r.fold_accuracies);
  j.at("mean_accuracy").get_to(r.mean_accuracy);
  for (const auto& l : j.at("oof_predictions")) {
    r.oof_predictions.push_back(OrdinalLabel::from_index(l.get<int>()));
  }
  r.pooled = ConfusionMatrix::from_json(j.at("pooled_confusion"));
  return r;
}

CvResult cross_validate(const Dataset& d, const ModelSpec& spec, const FoldPlan& plan) {
  if (plan.assignments.size() != d.rows()) {
    throw Error(ErrorKind::kCrossValidation, "fold plan covers " +
                                                 std::to_string(plan.assignments.size()) +
                                                 " rows, dataset has " + std::to_string(d.rows()));
  }
  CvResult out;
  out.model_id = spec.id;
  out.seed = spec.seed;
  out.oof_predictions.assign(d.rows(), OrdinalLabel{});
  for (int fold = 0; fold < plan.k; ++fold) {
    const auto test = plan.test_rows(fold);
    const auto train = plan.train_rows(fold);
    if (test.empty() || train.empty()) {
      throw Error(ErrorKind::kCrossValidation, "fold " + std::to_string(fold) + " is empty");
    }
    ModelSpec fold_spec = spec;
    fold_spec.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(fold));
    std::optional<TrainedModel> model;
    try {
      model.emplace(fit_model(fold_spec, d.subset_rows(train)));
    } catch (const Error& e) {
      throw Error(ErrorKind::kCrossValidation, "model '" + spec.id + "' fold " +
                                                   std::to_string(fold) + ": " + e.what());
    }
    std::size_t correct = 0;
    for (auto r : test) {
      const auto pred = model->predict(d.row(r));
      out.oof_predictions[r] = pred;
      if (pred == d.label(r)) ++correct;
    }
    out.fold_accuracies.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  out.mean_accuracy =
      std::accumulate(out.fold_accuracies.begin(), out.fold_accuracies.end(), 0.0) /
      static_cast<double>(out.fold_accuracies.size());
  out.pooled = confusion_matrix(d.labels(), out.oof_predictions);
  return out;
}

nlohmann::json RankEntry::to_json() const {
  return {{"rank", rank}, {"model_id", model_id}, {"mean_accuracy", mean_accuracy},
          {"macro_f", macro_f}};
}

RankEntry RankEntry::from_json(const nlohmann::json& j) {
  return {j.at("rank").get<int>(), j.at("model_id").get<std::string>(),
          j.at("mean_accuracy").get<double>(), j.at("macro_f").get<double>()};
}

std::vector<RankEntry> rank_models(std::span<const CvResult> results) {
  if (results.empty()) throw Error(ErrorKind::kInput, "no models to rank");
  std::set<std::string> ids;
  std::vector<RankEntry> out;
  for (const auto& r : results) {
    if (!ids.insert(r.model_id).second) {
      throw Error(ErrorKind::kInput, "duplicate model id '" + r.model_id + "'");
    }
    double macro_f = 0.0;
    if (r.pooled.total() > 0) macro_f = per_class_metrics(r.pooled).macro.f_score.value_or(0.0);
    out.push_back({0, r.model_id, r.mean_accuracy, macro_f});
  }
  std::sort(out.begin(), out.end(), [](const RankEntry& a, const RankEntry& b) {
    if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
    if (a.macro_f != b.macro_f) return a.macro_f > b.macro_f;
    return a.model_id < b.model_id;
  });
  for (std::size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
  return out;
}

}  // namespace efpred
