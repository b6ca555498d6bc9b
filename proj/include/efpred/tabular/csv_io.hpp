#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "efpred/tabular/dataset.hpp"

namespace efpred {

/// Comma-separated text, first row = header, empty cell = missing.
/// Header must name exactly the schema columns plus the target, in any order.
Dataset load_dataset(const std::filesystem::path& path, const FeatureSchema& schema);
Dataset parse_dataset(std::istream& in, const FeatureSchema& schema,
                      std::string_view source = "<stream>");

/// Header in schema order, target last. Reals use the shortest text that
/// parses back to the identical double.
void write_dataset(std::ostream& out, const Dataset& d);
void write_dataset(const std::filesystem::path& path, const Dataset& d);

std::string format_number(double v);

}  // namespace efpred
