#include "efpred/tabular/csv_io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <vector>

#include "efpred/common/error.hpp"
#include "efpred/report/atomic_file.hpp"

namespace efpred {
namespace {

std::vector<std::string_view> split_line(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      break;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_double(std::string_view s) {
  double v = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::optional<double> parse_binary(std::string_view s) {
  const std::string v = lower(s);
  if (v == "1" || v == "yes" || v == "value1" || v == "1.0") return 1.0;
  if (v == "0" || v == "no" || v == "value0" || v == "0.0") return 0.0;
  return std::nullopt;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const FeatureSchema& schema, std::string_view source) {
  const std::string src(source);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::kSchema, src + ": empty file, no header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

  const auto header = split_line(line);
  // position in file for each schema column; target last
  const std::size_t width = schema.width();
  std::vector<std::optional<std::size_t>> file_pos(width + 1);
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string name(trim(header[i]));
    std::optional<std::size_t> slot;
    if (name == schema.target()) {
      slot = width;
    } else {
      slot = schema.index_of(name);
    }
    if (!slot) throw Error(ErrorKind::kSchema, src + ": unexpected column '" + name + "'");
    if (file_pos[*slot]) throw Error(ErrorKind::kSchema, src + ": duplicate column '" + name + "'");
    file_pos[*slot] = i;
  }
  for (std::size_t c = 0; c < width; ++c) {
    if (!file_pos[c]) {
      throw Error(ErrorKind::kSchema, src + ": missing column '" + schema.column(c).name + "'");
    }
  }
  if (!file_pos[width]) {
    throw Error(ErrorKind::kSchema, src + ": missing target column '" + schema.target() + "'");
  }

  std::vector<double> values;
  std::vector<std::uint8_t> missing;
  std::vector<OrdinalLabel> labels;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    ++row;
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw Error(ErrorKind::kParse, src + ": row " + std::to_string(row) + " has " +
                                         std::to_string(cells.size()) + " cells, header has " +
                                         std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < width; ++c) {
      const std::string_view cell = trim(cells[*file_pos[c]]);
      const Column& col = schema.column(c);
      if (cell.empty()) {
        values.push_back(std::numeric_limits<double>::quiet_NaN());
        missing.push_back(1);
        continue;
      }
      const auto v = col.kind == ColumnKind::kBinary ? parse_binary(cell) : parse_double(cell);
      if (!v) {
        throw Error(ErrorKind::kParse, src + ": row " + std::to_string(row) + ", column '" +
                                           col.name + "': cannot parse '" + std::string(cell) +
                                           "' as " + std::string(to_string(col.kind)));
      }
      values.push_back(*v);
      missing.push_back(0);
    }
    const std::string_view label_cell = trim(cells[*file_pos[width]]);
    int idx = -1;
    const auto [ptr, ec] =
        std::from_chars(label_cell.data(), label_cell.data() + label_cell.size(), idx);
    if (label_cell.empty() || ec != std::errc() || ptr != label_cell.data() + label_cell.size() ||
        idx < 0 || idx >= kNumClasses) {
      throw Error(ErrorKind::kLabel, src + ": row " + std::to_string(row) + ": label '" +
                                         std::string(label_cell) + "' not in {0,1,2}");
    }
    labels.push_back(OrdinalLabel::from_index(idx));
  }
  return Dataset(schema, std::move(values), std::move(labels), std::move(missing));
}

Dataset load_dataset(const std::filesystem::path& path, const FeatureSchema& schema) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
  return parse_dataset(in, schema, path.string());
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_dataset(std::ostream& out, const Dataset& d) {
  for (const auto& c : d.schema().columns()) out << c.name << ',';
  out << d.schema().target() << '\n';
  for (std::size_t r = 0; r < d.rows(); ++r) {
    for (std::size_t c = 0; c < d.cols(); ++c) {
      if (!d.is_missing(r, c)) out << format_number(d.at(r, c));
      out << ',';
    }
    out << d.label(r).index() << '\n';
  }
}

void write_dataset(const std::filesystem::path& path, const Dataset& d) {
  std::ostringstream os;
  write_dataset(os, d);
  write_file_atomic(path, os.str());
}

}  // namespace efpred
