#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "efpred/common/error.hpp"
#include "efpred/learners/model.hpp"
#include "helpers.hpp"
#include "json.hpp"

using namespace efpred;

TEST_CASE("model specs parse and reject unknown keys") {
  for (auto fam : {ModelFamily::kDecisionTree, ModelFamily::kRandomForest, ModelFamily::kKnn,
                   ModelFamily::kOrdinalLogit, ModelFamily::kSvm}) {
    CHECK(parse_model_family(to_string(fam)) == fam);
    const auto spec = default_spec(fam, 3);
    CHECK(spec.family() == fam);
    const auto back = params_from_json(fam, params_to_json(spec.params));
    CHECK(params_to_json(back) == params_to_json(spec.params));
  }
  CHECK_THROWS_AS(parse_model_family("lasso"), Error);
  CHECK_THROWS_AS(params_from_json(ModelFamily::kKnn, nlohmann::json{{"kk", 3}}), Error);
  CHECK_THROWS_AS(params_from_json(ModelFamily::kDecisionTree, nlohmann::json{{"k", 3}}), Error);
  const auto knn = params_from_json(ModelFamily::kKnn, nlohmann::json{{"k", 7}});
  CHECK(std::get<KnnParams>(knn).k == 7);
}

TEST_CASE("every family survives save and load") {
  const auto train = efpred::testing::blobs(25, 31, 1.2);
  const auto probe = efpred::testing::blobs(25, 32, 1.2);
  const auto dir = std::filesystem::temp_directory_path() / "efpred_model_io";
  std::filesystem::create_directories(dir);
  for (auto fam : {ModelFamily::kDecisionTree, ModelFamily::kRandomForest, ModelFamily::kKnn,
                   ModelFamily::kOrdinalLogit, ModelFamily::kSvm}) {
    auto spec = default_spec(fam, 8);
    if (fam == ModelFamily::kRandomForest) std::get<ForestParams>(spec.params).n_trees = 30;
    const auto m = fit_model(spec, train);
    const auto path = dir / (std::string(to_string(fam)) + ".json");
    m.save(path);
    const auto back = TrainedModel::load(path);
    CHECK(back.family() == fam);
    CHECK(back.to_json() == m.to_json());
    for (std::size_t r = 0; r < probe.rows(); ++r) CHECK(back.predict(probe.row(r)) == m.predict(probe.row(r)));
    // the file is stable under a second save
    const auto again = dir / "again.json";
    back.save(again);
    std::ifstream a(path), b(again);
    CHECK(std::string(std::istreambuf_iterator<char>(a), {}) ==
          std::string(std::istreambuf_iterator<char>(b), {}));
  }
  std::filesystem::remove_all(dir);
}

TEST_CASE("model files carry a format version") {
  const auto m = fit_model(default_spec(ModelFamily::kKnn), efpred::testing::blobs(5, 1));
  auto j = m.to_json();
  CHECK(j.at("format") == std::string(kModelFormatVersion));
  j["format"] = "efpred-model/99";
  CHECK_THROWS_AS(TrainedModel::from_json(j), Error);
}
