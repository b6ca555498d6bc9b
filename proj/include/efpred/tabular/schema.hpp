#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace efpred {

inline constexpr int kNumClasses = 3;

/// Ejection-fraction band. Ordered by severity:
/// 0 = Normal (50-70%), 1 = Below normal (36-49%), 2 = Low (<35%).
class OrdinalLabel {
 public:
  constexpr OrdinalLabel() = default;

  /// Throws ErrorKind::kLabel for anything outside {0, 1, 2}.
  static OrdinalLabel from_index(int index);

  constexpr int index() const noexcept { return index_; }
  std::string_view name() const noexcept;

  friend constexpr auto operator<=>(OrdinalLabel, OrdinalLabel) = default;

 private:
  constexpr explicit OrdinalLabel(std::uint8_t index) : index_(index) {}
  std::uint8_t index_ = 0;
};

enum class ColumnKind { kContinuous, kBinary };

std::string_view to_string(ColumnKind kind);

struct Column {
  std::string name;
  ColumnKind kind = ColumnKind::kContinuous;

  friend bool operator==(const Column&, const Column&) = default;
};

/// Ordered feature columns plus the name of the ordinal target column.
class FeatureSchema {
 public:
  FeatureSchema() = default;
  FeatureSchema(std::vector<Column> columns, std::string target);

  /// The fourteen step-1 inputs (demographic, laboratory, clinical, timing).
  static FeatureSchema step1();
  /// The six operational step-2 inputs.
  static FeatureSchema step2();
  /// "step1", "step2", or a path to a schema JSON file.
  static FeatureSchema resolve(std::string_view name_or_path);

  static FeatureSchema from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;

  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::string& target() const noexcept { return target_; }
  std::size_t width() const noexcept { return columns_.size(); }
  const Column& column(std::size_t i) const { return columns_.at(i); }
  std::optional<std::size_t> index_of(std::string_view name) const;
  std::vector<std::string> names() const;

  /// Sub-schema with the named columns, kept in this schema's order.
  FeatureSchema select(const std::vector<std::string>& names) const;

  friend bool operator==(const FeatureSchema&, const FeatureSchema&) = default;

 private:
  std::vector<Column> columns_;
  std::string target_;
};

}  // namespace efpred
