#include "efpred/report/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"

namespace efpred {
namespace {

template <class T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw Error(ErrorKind::kConfig, std::string("config field '") + key + "' has the wrong type");
  }
}

}  // namespace

PipelineConfig PipelineConfig::with_default_models() {
  PipelineConfig cfg;
  for (auto f : {ModelFamily::kDecisionTree, ModelFamily::kKnn, ModelFamily::kOrdinalLogit,
                 ModelFamily::kRandomForest, ModelFamily::kSvm}) {
    cfg.models.push_back(default_spec(f));
  }
  return cfg;
}

void PipelineConfig::validate() const {
  if (folds < 2) throw Error(ErrorKind::kConfig, "folds must be >= 2");
  if (models.empty()) throw Error(ErrorKind::kConfig, "no models enabled");
  std::set<std::string> ids;
  for (const auto& m : models) {
    if (!ids.insert(m.id).second) throw Error(ErrorKind::kConfig, "duplicate model '" + m.id + "'");
  }
  for (std::size_t i = 1; i < rfe_sizes.size(); ++i) {
    if (rfe_sizes[i] >= rfe_sizes[i - 1]) {
      throw Error(ErrorKind::kConfig, "rfe.sizes must be strictly descending");
    }
  }
  if (dataset.empty()) throw Error(ErrorKind::kConfig, "no dataset given");
  if (output_dir.empty()) throw Error(ErrorKind::kConfig, "no output directory given");
}

nlohmann::json PipelineConfig::to_json() const {
  nlohmann::json models_j = nlohmann::json::object();
  for (const auto& m : models) models_j[m.id] = params_to_json(m.params);
  return {{"dataset", dataset.string()},
          {"schema", schema},
          {"seed", seed},
          {"folds", folds},
          {"models", models_j},
          {"rfe",
           {{"sizes", rfe_sizes},
            {"n_trees", rfe_forest.n_trees},
            {"mtry", rfe_forest.mtry ? nlohmann::json(*rfe_forest.mtry) : nlohmann::json()},
            {"min_leaf", rfe_forest.min_leaf}}},
          {"output_dir", output_dir.string()},
          {"threads", threads},
          {"save_models", save_models}};
}

PipelineConfig PipelineConfig::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "config must be a JSON object");
  static const std::set<std::string> known{"dataset", "schema",     "seed",    "folds",
                                           "models",  "rfe",        "output_dir", "threads",
                                           "save_models"};
  for (const auto& [key, _] : j.items()) {
    if (!known.count(key)) throw Error(ErrorKind::kConfig, "unknown config field '" + key + "'");
  }
  PipelineConfig cfg;
  cfg.dataset = get_or<std::string>(j, "dataset", "");
  cfg.schema = get_or<std::string>(j, "schema", cfg.schema);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.folds = get_or<int>(j, "folds", cfg.folds);
  cfg.output_dir = get_or<std::string>(j, "output_dir", cfg.output_dir.string());
  cfg.threads = get_or<unsigned>(j, "threads", cfg.threads);
  cfg.save_models = get_or<bool>(j, "save_models", cfg.save_models);

  if (j.contains("models")) {
    const auto& mj = j.at("models");
    if (!mj.is_object()) throw Error(ErrorKind::kConfig, "'models' must map model names to parameters");
    for (const auto& [name, params] : mj.items()) {
      const auto family = parse_model_family(name);
      cfg.models.push_back({name, params_from_json(family, params), 0});
    }
  } else {
    cfg.models = with_default_models().models;
  }

  if (j.contains("rfe") && !j.at("rfe").is_null()) {
    const auto& rj = j.at("rfe");
    if (!rj.is_object()) throw Error(ErrorKind::kConfig, "'rfe' must be an object");
    for (const auto& [key, _] : rj.items()) {
      if (key != "sizes" && key != "n_trees" && key != "mtry" && key != "min_leaf") {
        throw Error(ErrorKind::kConfig, "unknown rfe field '" + key + "'");
      }
    }
    cfg.rfe_sizes = get_or<std::vector<std::size_t>>(rj, "sizes", {});
    cfg.rfe_forest.n_trees = get_or<int>(rj, "n_trees", cfg.rfe_forest.n_trees);
    if (rj.contains("mtry") && !rj.at("mtry").is_null()) cfg.rfe_forest.mtry = get_or<int>(rj, "mtry", 1);
    cfg.rfe_forest.min_leaf = get_or<int>(rj, "min_leaf", cfg.rfe_forest.min_leaf);
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kConfig, "cannot open config '" + path.string() + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, path.string() + ": " + e.what());
  }
  return from_json(j);
}

std::string PipelineConfig::hash() const {
  auto j = to_json();
  j.erase("output_dir");
  j.erase("threads");
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
  return buf;
}

}  // namespace efpred
