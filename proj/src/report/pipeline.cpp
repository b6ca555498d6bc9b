#include "efpred/report/pipeline.hpp"

#include <algorithm>
#include <sstream>

#include "efpred/common/error.hpp"
#include "efpred/common/rng.hpp"
#include "efpred/report/atomic_file.hpp"
#include "efpred/tabular/csv_io.hpp"
#include "efpred/tabular/folds.hpp"
#include "efpred/tabular/preprocess.hpp"

namespace efpred {
namespace {

template <class F>
auto stage(std::string_view name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), "stage '" + std::string(name) + "': " + e.message());
  }
}

struct PipelineState {
  RunReport report;
  Dataset data;  // balanced, feature-selected
  std::vector<ModelSpec> specs;
};

ForestParams with_threads(ForestParams p, unsigned threads) {
  p.threads = threads;
  return p;
}

PipelineState run_internal(const PipelineConfig& cfg, const Dataset& raw) {
  cfg.validate();
  const auto seeds = SeedPlan::from(cfg.seed);
  PipelineState st;
  auto& rep = st.report;
  rep.provenance = {cfg.seed,         cfg.hash(),  std::string(kVersion), cfg.schema,
                    raw.rows(),       0,           raw.class_counts()};

  const Dataset imputed = stage("impute", [&] { return impute_missing(raw); });
  Dataset data = stage("balance", [&] { return upsample_balance(imputed, seeds.balance); });
  rep.provenance.balanced_rows = data.rows();

  if (!cfg.rfe_sizes.empty()) {
    rep.rfe = stage("select", [&] {
      return run_rfe(data, cfg.rfe_sizes, cfg.folds, seeds.rfe,
                     with_threads(cfg.rfe_forest, cfg.threads));
    });
    data = data.select_features(rep.rfe->selected);
  }
  rep.features = data.schema().names();

  const FoldPlan plan = stage("folds", [&] { return stratified_folds(data, cfg.folds, seeds.folds); });

  st.specs = cfg.models;
  std::sort(st.specs.begin(), st.specs.end(),
            [](const ModelSpec& a, const ModelSpec& b) { return a.id < b.id; });
  std::vector<CvResult> results;
  for (auto& spec : st.specs) {
    spec.seed = seeds.model(spec.id);
    if (auto* fp = std::get_if<ForestParams>(&spec.params)) fp->threads = cfg.threads;
    auto cv = stage("cross-validate", [&] { return cross_validate(data, spec, plan); });
    auto metrics = stage("metrics", [&] { return per_class_metrics(cv.pooled); });
    results.push_back(cv);
    rep.models.push_back({std::move(cv), metrics});
  }
  rep.ranking = stage("rank", [&] { return rank_models(results); });

  rep.forest = stage("forest diagnostics", [&] {
    ForestParams params;
    for (const auto& s : st.specs) {
      if (const auto* fp = std::get_if<ForestParams>(&s.params)) params = *fp;
    }
    params.threads = cfg.threads;
    const auto forest = train_forest(data, params, seeds.forest);
    ForestDiagnostics diag{forest.oob_error_curve(), forest.node_histogram(), {}};
    for (std::size_t f = 0; f < data.cols(); ++f) {
      diag.importance.entries.emplace_back(data.schema().column(f).name, forest.gini_importance()[f]);
    }
    std::sort(diag.importance.entries.begin(), diag.importance.entries.end(),
              [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
              });
    return diag;
  });
  st.data = std::move(data);
  return st;
}

void emit_into(ArtifactSet& out, const RunReport& report) {
  if (!report.forest) throw Error(ErrorKind::kEmission, "report has no forest diagnostics");
  const auto& fd = *report.forest;
  if (fd.oob_error_curve.size() != fd.node_histogram.size()) {
    throw Error(ErrorKind::kEmission, "OOB curve and node histogram lengths differ");
  }
  std::ostringstream oob, hist, imp;
  oob << "tree_count,error\n";
  for (std::size_t t = 0; t < fd.oob_error_curve.size(); ++t) {
    oob << t + 1 << ',' << format_number(fd.oob_error_curve[t]) << '\n';
  }
  hist << "tree_index,node_count\n";
  for (std::size_t t = 0; t < fd.node_histogram.size(); ++t) {
    hist << t << ',' << fd.node_histogram[t] << '\n';
  }
  imp << "feature,gini_importance\n";
  for (const auto& [name, score] : fd.importance.entries) imp << name << ',' << format_number(score) << '\n';
  out.write("oob_error.csv", oob.str());
  out.write("node_histogram.csv", hist.str());
  out.write("importance.csv", imp.str());
  if (report.rfe) out.write("rmse_curve.csv", report.rfe->curve_csv());
}

}  // namespace

std::uint64_t SeedPlan::model(const std::string& id) const {
  return derive_seed(root, "model:" + id);
}

SeedPlan SeedPlan::from(std::uint64_t seed) {
  return {seed, derive_seed(seed, "balance"), derive_seed(seed, "folds"), derive_seed(seed, "rfe"),
          derive_seed(seed, "forest")};
}

RunReport run_pipeline(const PipelineConfig& cfg, const Dataset& raw) {
  return run_internal(cfg, raw).report;
}

RunReport run_pipeline(const PipelineConfig& cfg) {
  cfg.validate();
  const Dataset raw = stage("load", [&] {
    return load_dataset(cfg.dataset, FeatureSchema::resolve(cfg.schema));
  });
  return run_pipeline(cfg, raw);
}

std::vector<std::filesystem::path> emit_figures(const RunReport& report,
                                                const std::filesystem::path& dir) {
  ArtifactSet out(dir);
  emit_into(out, report);
  out.commit();
  return out.files();
}

std::vector<std::filesystem::path> write_run_artifacts(const RunReport& report,
                                                       const std::filesystem::path& dir) {
  ArtifactSet out(dir);
  out.write("report.json", report.to_json().dump(2) + "\n");
  out.write("summary.txt", report.summary());
  emit_into(out, report);
  out.commit();
  return out.files();
}

RunReport run_and_write(const PipelineConfig& cfg) {
  cfg.validate();
  const Dataset raw = stage("load", [&] {
    return load_dataset(cfg.dataset, FeatureSchema::resolve(cfg.schema));
  });
  auto st = run_internal(cfg, raw);

  ArtifactSet out(cfg.output_dir);
  out.write("report.json", st.report.to_json().dump(2) + "\n");
  out.write("summary.txt", st.report.summary());
  stage("emit figures", [&] {
    emit_into(out, st.report);
    return 0;
  });
  if (cfg.save_models) {
    for (const auto& spec : st.specs) {
      const auto model = stage("save models", [&] { return fit_model(spec, st.data); });
      out.write("model_" + spec.id + ".json", model.to_json().dump(1) + "\n");
    }
  }
  out.commit();
  return st.report;
}

}  // namespace efpred
