#include <fstream>
#include <iomanip>
#include <sstream>

#include "efpred/common/error.hpp"
#include "efpred/report/pipeline.hpp"

namespace efpred {

nlohmann::json RunReport::to_json() const {
  nlohmann::json models_j = nlohmann::json::array();
  for (const auto& m : models) {
    models_j.push_back({{"cv", m.cv.to_json()}, {"metrics", m.metrics.to_json()}});
  }
  nlohmann::json ranking_j = nlohmann::json::array();
  for (const auto& r : ranking) ranking_j.push_back(r.to_json());
  nlohmann::json forest_j;
  if (forest) {
    forest_j = {{"oob_error_curve", forest->oob_error_curve},
                {"node_histogram", forest->node_histogram},
                {"importance", forest->importance.to_json()}};
  }
  const auto& p = provenance;
  return {{"format", kReportFormatVersion},
          {"provenance",
           {{"seed", p.seed},
            {"config_hash", p.config_hash},
            {"version", p.version},
            {"schema", p.schema},
            {"input_rows", p.input_rows},
            {"balanced_rows", p.balanced_rows},
            {"input_class_counts", p.input_class_counts}}},
          {"features", features},
          {"models", models_j},
          {"ranking", ranking_j},
          {"rfe", rfe ? rfe->to_json() : nlohmann::json()},
          {"forest", forest_j}};
}

RunReport RunReport::from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != kReportFormatVersion) {
      throw Error(ErrorKind::kParse, "unsupported report format '" + j.at("format").get<std::string>() + "'");
    }
    RunReport r;
    const auto& pj = j.at("provenance");
    auto& p = r.provenance;
    pj.at("seed").get_to(p.seed);
    pj.at("config_hash").get_to(p.config_hash);
    pj.at("version").get_to(p.version);
    pj.at("schema").get_to(p.schema);
    pj.at("input_rows").get_to(p.input_rows);
    pj.at("balanced_rows").get_to(p.balanced_rows);
    pj.at("input_class_counts").get_to(p.input_class_counts);
    j.at("features").get_to(r.features);
    for (const auto& mj : j.at("models")) {
      r.models.push_back({CvResult::from_json(mj.at("cv")), MetricsTable::from_json(mj.at("metrics"))});
    }
    for (const auto& rj : j.at("ranking")) r.ranking.push_back(RankEntry::from_json(rj));
    if (!j.at("rfe").is_null()) r.rfe = RfeResult::from_json(j.at("rfe"));
    if (!j.at("forest").is_null()) {
      const auto& fj = j.at("forest");
      r.forest = ForestDiagnostics{fj.at("oob_error_curve").get<std::vector<double>>(),
                                   fj.at("node_histogram").get<std::vector<std::size_t>>(),
                                   ImportanceRanking::from_json(fj.at("importance"))};
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("malformed report: ") + e.what());
  }
}

RunReport RunReport::load(const std::filesystem::path& path) {
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

std::string RunReport::summary() const {
  std::ostringstream os;
  const auto& p = provenance;
  os << "efpred " << p.version << "  schema " << p.schema << "  seed " << p.seed << "  config "
     << p.config_hash << '\n';
  os << "rows: " << p.input_rows << " input (" << p.input_class_counts[0] << '/'
     << p.input_class_counts[1] << '/' << p.input_class_counts[2] << "), " << p.balanced_rows
     << " after balancing\n";
  os << "features (" << features.size() << "):";
  for (const auto& f : features) os << ' ' << f;
  os << "\n\n";

  os << "Model ranking (cross-validated mean accuracy)\n";
  os << std::left << std::setw(6) << "rank" << std::setw(16) << "model" << std::right
     << std::setw(10) << "mean acc" << std::setw(10) << "macro F" << '\n';
  for (const auto& r : ranking) {
    os << std::left << std::setw(6) << r.rank << std::setw(16) << r.model_id << std::right
       << std::setw(9) << display_percent(r.mean_accuracy) << '%' << std::setw(9)
       << display_percent(r.macro_f) << "%\n";
  }
  for (const auto& m : models) {
    os << "\n== " << m.cv.model_id << " (pooled out-of-fold) ==\n";
    os << format_metrics(m.cv.pooled, m.metrics);
  }
  if (rfe) {
    os << "\nRecursive feature elimination (CV RMSE)\n";
    for (const auto& pt : rfe->curve) {
      os << std::setw(6) << pt.size << std::setw(12) << std::fixed << std::setprecision(4) << pt.rmse
         << (pt.size == rfe->selected_size ? "  <- selected" : "") << '\n';
    }
    os.unsetf(std::ios::fixed);
  }
  if (forest) {
    os << "\nGini importance (" << forest->oob_error_curve.size() << " trees, final OOB error "
       << display_percent(forest->oob_error_curve.empty() ? 0.0 : forest->oob_error_curve.back())
       << "%)\n";
    for (const auto& [name, score] : forest->importance.entries) {
      os << "  " << std::left << std::setw(16) << name << std::right << std::setw(10)
         << std::fixed << std::setprecision(5) << score << '\n';
    }
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

}  // namespace efpred
