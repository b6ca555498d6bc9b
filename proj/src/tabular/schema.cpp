#include "efpred/tabular/schema.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "json.hpp"

#include "efpred/common/error.hpp"

namespace efpred {

OrdinalLabel OrdinalLabel::from_index(int index) {
  if (index < 0 || index >= kNumClasses) {
    throw Error(ErrorKind::kLabel, "class index " + std::to_string(index) + " outside {0,1,2}");
  }
  return OrdinalLabel(static_cast<std::uint8_t>(index));
}

std::string_view OrdinalLabel::name() const noexcept {
  switch (index_) {
    case 0: return "Normal";
    case 1: return "Below normal";
    default: return "Low";
  }
}

std::string_view to_string(ColumnKind kind) {
  return kind == ColumnKind::kBinary ? "binary" : "continuous";
}

FeatureSchema::FeatureSchema(std::vector<Column> columns, std::string target)
    : columns_(std::move(columns)), target_(std::move(target)) {
  if (target_.empty()) throw Error(ErrorKind::kSchema, "target name is empty");
  std::set<std::string> seen;
  for (const auto& c : columns_) {
    if (c.name.empty()) throw Error(ErrorKind::kSchema, "empty column name");
    if (!seen.insert(c.name).second) {
      throw Error(ErrorKind::kSchema, "duplicate column '" + c.name + "'");
    }
    if (c.name == target_) {
      throw Error(ErrorKind::kSchema, "target '" + target_ + "' listed as a feature column");
    }
  }
}

FeatureSchema FeatureSchema::step1() {
  using K = ColumnKind;
  return FeatureSchema({{"Age", K::kContinuous},
                        {"LAD", K::kBinary},
                        {"W.B.C", K::kContinuous},
                        {"R.B.C", K::kContinuous},
                        {"B.U.N", K::kContinuous},
                        {"HB", K::kContinuous},
                        {"CPK", K::kContinuous},
                        {"CPK-MB", K::kContinuous},
                        {"PR", K::kContinuous},
                        {"BS", K::kContinuous},
                        {"TimeX12", K::kContinuous},
                        {"TimeX1234", K::kContinuous},
                        {"TimeX23", K::kContinuous},
                        {"HeartNormSound", K::kBinary}},
                       "EF");
}

FeatureSchema FeatureSchema::step2() {
  using K = ColumnKind;
  return FeatureSchema({{"TimeX12", K::kContinuous},
                        {"TimeX1234", K::kContinuous},
                        {"TimeX23", K::kContinuous},
                        {"TimeX123", K::kContinuous},
                        {"HeartNormSound", K::kBinary},
                        {"FmcOnset", K::kContinuous}},
                       "EF");
}

FeatureSchema FeatureSchema::resolve(std::string_view name_or_path) {
  if (name_or_path == "step1") return step1();
  if (name_or_path == "step2") return step2();
  std::ifstream in{std::string(name_or_path)};
  if (!in) {
    throw Error(ErrorKind::kConfig, "unknown schema '" + std::string(name_or_path) +
                                        "' (expected step1, step2, or a schema file)");
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, "schema file '" + std::string(name_or_path) + "': " + e.what());
  }
  return from_json(j);
}

FeatureSchema FeatureSchema::from_json(const nlohmann::json& j) {
  try {
    std::vector<Column> cols;
    for (const auto& c : j.at("columns")) {
      const auto kind = c.at("kind").get<std::string>();
      if (kind != "continuous" && kind != "binary") {
        throw Error(ErrorKind::kSchema, "column kind '" + kind + "' is not continuous|binary");
      }
      cols.push_back({c.at("name").get<std::string>(),
                      kind == "binary" ? ColumnKind::kBinary : ColumnKind::kContinuous});
    }
    return FeatureSchema(std::move(cols), j.at("target").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kSchema, std::string("malformed schema: ") + e.what());
  }
}

nlohmann::json FeatureSchema::to_json() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns_) {
    cols.push_back({{"name", c.name}, {"kind", std::string(efpred::to_string(c.kind))}});
  }
  return {{"columns", cols}, {"target", target_}};
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i].name == name) return i;
  }
  return std::nullopt;
}

std::vector<std::string> FeatureSchema::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

FeatureSchema FeatureSchema::select(const std::vector<std::string>& names) const {
  for (const auto& n : names) {
    if (!index_of(n)) throw Error(ErrorKind::kSchema, "unknown column '" + n + "'");
  }
  std::vector<Column> cols;
  for (const auto& c : columns_) {
    if (std::find(names.begin(), names.end(), c.name) != names.end()) cols.push_back(c);
  }
  return FeatureSchema(std::move(cols), target_);
}

}  // namespace efpred
