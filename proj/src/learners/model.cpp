#include "efpred/learners/model.hpp"

#include <algorithm>
#include <fstream>

#include "efpred/common/error.hpp"
#include "efpred/report/atomic_file.hpp"

namespace efpred {
namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

std::string_view to_string(ModelFamily family) {
  switch (family) {
    case ModelFamily::kDecisionTree: return "decision_tree";
    case ModelFamily::kRandomForest: return "random_forest";
    case ModelFamily::kKnn: return "knn";
    case ModelFamily::kOrdinalLogit: return "ordinal_logit";
    case ModelFamily::kSvm: return "svm";
  }
  return "unknown";
}

ModelFamily parse_model_family(std::string_view name) {
  for (auto f : {ModelFamily::kDecisionTree, ModelFamily::kRandomForest, ModelFamily::kKnn,
                 ModelFamily::kOrdinalLogit, ModelFamily::kSvm}) {
    if (to_string(f) == name) return f;
  }
  throw Error(ErrorKind::kConfig, "unknown model '" + std::string(name) +
                                      "' (expected decision_tree, random_forest, knn, "
                                      "ordinal_logit, svm)");
}

ModelFamily ModelSpec::family() const {
  return static_cast<ModelFamily>(params.index());
}

ModelSpec default_spec(ModelFamily family, std::uint64_t seed) {
  ModelSpec s{std::string(to_string(family)), {}, seed};
  switch (family) {
    case ModelFamily::kDecisionTree: s.params = TreeParams{}; break;
    case ModelFamily::kRandomForest: s.params = ForestParams{}; break;
    case ModelFamily::kKnn: s.params = KnnParams{}; break;
    case ModelFamily::kOrdinalLogit: s.params = OlrParams{}; break;
    case ModelFamily::kSvm: s.params = SvmParams{}; break;
  }
  return s;
}

nlohmann::json params_to_json(const ModelParams& params) {
  return std::visit(
      Overloaded{
          [](const TreeParams& p) -> nlohmann::json {
            return {{"min_leaf", p.min_leaf}, {"max_depth", p.max_depth}};
          },
          [](const ForestParams& p) -> nlohmann::json {
            return {{"n_trees", p.n_trees},
                    {"mtry", p.mtry ? nlohmann::json(*p.mtry) : nlohmann::json()},
                    {"min_leaf", p.min_leaf},
                    {"max_depth", p.max_depth}};
          },
          [](const KnnParams& p) -> nlohmann::json { return {{"k", p.k}}; },
          [](const OlrParams& p) -> nlohmann::json {
            return {{"max_iter", p.max_iter}, {"tol", p.tol}};
          },
          [](const SvmParams& p) -> nlohmann::json {
            return {{"C", p.C},
                    {"gamma", p.gamma ? nlohmann::json(*p.gamma) : nlohmann::json()},
                    {"tol", p.tol},
                    {"max_iter", p.max_iter}};
          },
      },
      params);
}

ModelParams params_from_json(ModelFamily family, const nlohmann::json& j) {
  if (!j.is_object() && !j.is_null()) {
    throw Error(ErrorKind::kConfig, "parameters for " + std::string(to_string(family)) +
                                        " must be an object");
  }
  const nlohmann::json obj = j.is_null() ? nlohmann::json::object() : j;
  auto get = [&](const char* key, auto fallback) {
    using T = decltype(fallback);
    if (!obj.contains(key) || obj.at(key).is_null()) return fallback;
    try {
      return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw Error(ErrorKind::kConfig, std::string(to_string(family)) + "." + key + " has the wrong type");
    }
  };
  auto get_opt = [&](const char* key, auto sample) -> std::optional<decltype(sample)> {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return get(key, sample);
  };
  std::vector<std::string> known;
  switch (family) {
    case ModelFamily::kDecisionTree: known = {"min_leaf", "max_depth"}; break;
    case ModelFamily::kRandomForest: known = {"n_trees", "mtry", "min_leaf", "max_depth"}; break;
    case ModelFamily::kKnn: known = {"k"}; break;
    case ModelFamily::kOrdinalLogit: known = {"max_iter", "tol"}; break;
    case ModelFamily::kSvm: known = {"C", "gamma", "tol", "max_iter"}; break;
  }
  for (const auto& [key, _] : obj.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw Error(ErrorKind::kConfig, "unknown parameter '" + key + "' for " +
                                          std::string(to_string(family)));
    }
  }
  switch (family) {
    case ModelFamily::kDecisionTree: {
      const TreeParams d;
      return TreeParams{get("min_leaf", d.min_leaf), get("max_depth", d.max_depth)};
    }
    case ModelFamily::kRandomForest: {
      ForestParams p;
      p.n_trees = get("n_trees", p.n_trees);
      p.mtry = get_opt("mtry", 0);
      p.min_leaf = get("min_leaf", p.min_leaf);
      p.max_depth = get("max_depth", p.max_depth);
      return p;
    }
    case ModelFamily::kKnn:
      return KnnParams{get("k", KnnParams{}.k)};
    case ModelFamily::kOrdinalLogit: {
      const OlrParams d;
      return OlrParams{get("max_iter", d.max_iter), get("tol", d.tol)};
    }
    case ModelFamily::kSvm: {
      SvmParams p;
      p.C = get("C", p.C);
      p.gamma = get_opt("gamma", 0.0);
      p.tol = get("tol", p.tol);
      p.max_iter = get("max_iter", p.max_iter);
      return p;
    }
  }
  throw Error(ErrorKind::kConfig, "unhandled model family");
}

TrainedModel::TrainedModel(FittedModel model, ScalingParams scaling, FeatureSchema schema)
    : model_(std::move(model)), scaling_(std::move(scaling)), schema_(std::move(schema)) {}

ModelFamily TrainedModel::family() const {
  return static_cast<ModelFamily>(model_.index());
}

OrdinalLabel TrainedModel::predict(std::span<const double> raw_row) const {
  const auto row = scaling_.apply_row(raw_row);
  return std::visit([&](const auto& m) { return m.predict(row); }, model_);
}

nlohmann::json TrainedModel::to_json() const {
  return {{"format", kModelFormatVersion},
          {"family", to_string(family())},
          {"schema", schema_.to_json()},
          {"scaling", scaling_.to_json()},
          {"model", std::visit([](const auto& m) { return m.to_json(); }, model_)}};
}

TrainedModel TrainedModel::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormatVersion) {
      throw Error(ErrorKind::kParse, "unsupported model format '" +
                                         j.at("format").get<std::string>() + "'");
    }
    const auto family = parse_model_family(j.at("family").get<std::string>());
    const auto& mj = j.at("model");
    FittedModel m;
    switch (family) {
      case ModelFamily::kDecisionTree: m = DecisionTree::from_json(mj); break;
      case ModelFamily::kRandomForest: m = ForestModel::from_json(mj); break;
      case ModelFamily::kKnn: m = KnnModel::from_json(mj); break;
      case ModelFamily::kOrdinalLogit: m = OrdinalLogitModel::from_json(mj); break;
      case ModelFamily::kSvm: m = SvmModel::from_json(mj); break;
    }
    return TrainedModel(std::move(m), ScalingParams::from_json(j.at("scaling")),
                        FeatureSchema::from_json(j.at("schema")));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed model file: ") + e.what());
  }
}

void TrainedModel::save(const std::filesystem::path& path) const {
  write_file_atomic(path, to_json().dump(1) + "\n");
}

TrainedModel TrainedModel::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return from_json(j);
}

TrainedModel fit_model(const ModelSpec& spec, const Dataset& d) {
  auto [scaled, scaling] = standardize(d);
  FittedModel fitted = std::visit(
      Overloaded{
          [&](const TreeParams& p) -> FittedModel { return train_tree(scaled, p); },
          [&](const ForestParams& p) -> FittedModel { return train_forest(scaled, p, spec.seed); },
          [&](const KnnParams& p) -> FittedModel { return train_knn(scaled, p.k); },
          [&](const OlrParams& p) -> FittedModel { return train_ordinal_logit(scaled, p); },
          [&](const SvmParams& p) -> FittedModel { return train_svm(scaled, p); },
      },
      spec.params);
  return TrainedModel(std::move(fitted), std::move(scaling), d.schema());
}

}  // namespace efpred
