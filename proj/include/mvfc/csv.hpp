#pragma once

// CSV ingestion and canonical CSV output.
//
// Numbers are written in the shortest decimal form that parses back to the
// same double (std::to_chars), so write -> load reproduces a Dataset exactly.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <variant>
#include <vector>

#include "mvfc/dataset.hpp"
#include "mvfc/error.hpp"

namespace mvfc {

inline std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string_view::npos) {
      cells.push_back(trim(line.substr(start)));
      return cells;
    }
    cells.push_back(trim(line.substr(start, pos - start)));
    start = pos + 1;
  }
}

inline bool parse_double(std::string_view cell, double& out) {
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), out);
  return res.ec == std::errc{} && res.ptr == cell.data() + cell.size() && std::isfinite(out);
}

}  // namespace detail

/// Label column selector: a header name or a zero-based column index.
using LabelColumn = std::variant<std::string, std::size_t>;

/// Parses a headed CSV stream. `source` names the input in error messages.
inline Dataset parse_csv(std::istream& in, const LabelColumn& label_column,
                         const std::string& source = "<stream>") {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty file, header row required");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header_cells = detail::split_commas(line);
  std::vector<std::string> header(header_cells.begin(), header_cells.end());

  std::size_t label_idx = header.size();
  if (const auto* name = std::get_if<std::string>(&label_column)) {
    for (std::size_t c = 0; c < header.size(); ++c)
      if (header[c] == *name) label_idx = c;
    if (label_idx == header.size())
      throw DataError(source + ": label column '" + *name + "' not found in header");
  } else {
    label_idx = std::get<std::size_t>(label_column);
    if (label_idx >= header.size())
      throw DataError(source + ": label column index " + std::to_string(label_idx) +
                      " out of range for " + std::to_string(header.size()) + " columns");
  }
  if (header.size() < 2) throw DataError(source + ": need at least one feature column and a label");

  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c)
    if (c != label_idx) names.push_back(header[c]);

  std::vector<double> values;
  std::vector<int> labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != header.size())
      throw DataError(source + ": line " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, header has " +
                      std::to_string(header.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v = 0.0;
      if (!detail::parse_double(cells[c], v))
        throw DataError(source + ": line " + std::to_string(line_no) + ", column '" + header[c] +
                        "': cannot parse '" + std::string(cells[c]) + "' as a finite number");
      if (c == label_idx) {
        if (v != 0.0 && v != 1.0)
          throw DataError(source + ": line " + std::to_string(line_no) + ": label '" +
                          std::string(cells[c]) + "' is not 0 or 1");
        labels.push_back(v == 1.0 ? 1 : 0);
      } else {
        values.push_back(v);
      }
    }
  }
  const std::size_t n = labels.size();
  const std::size_t f = names.size();
  return Dataset(Matrix(n, f, std::move(values)), std::move(labels), std::move(names));
}

inline Dataset load_csv(const std::filesystem::path& path,
                        const LabelColumn& label_column = std::string("label")) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_csv(in, label_column, path.string());
}

/// Features in column order followed by the label column.
inline void write_csv(std::ostream& out, const Dataset& ds, const std::string& label_name = "label") {
  for (const auto& name : ds.feature_names()) {
    if (name == label_name)
      throw DataError("feature name '" + name + "' collides with the label column name");
    out << name << ',';
  }
  out << label_name << '\n';
  for (std::size_t r = 0; r < ds.n_samples(); ++r) {
    for (double v : ds.samples().row(r)) out << format_double(v) << ',';
    out << ds.labels()[r] << '\n';
  }
}

inline std::string to_csv_string(const Dataset& ds, const std::string& label_name = "label") {
  std::ostringstream out;
  write_csv(out, ds, label_name);
  return out.str();
}

/// Writes through a temporary sibling file and renames it into place.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write '" + tmp.string() + "'");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw DataError("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// Square matrices over features (collaboration / interaction-gain grids).
//
// Layout: header ",name1,...,namef", then one row per feature "namei,v,...".

inline std::string matrix_to_csv(const Matrix& m, const std::vector<std::string>& names) {
  std::ostringstream out;
  for (const auto& name : names) out << ',' << name;
  out << '\n';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    out << names[i];
    for (std::size_t j = 0; j < m.cols(); ++j) out << ',' << format_double(m(i, j));
    out << '\n';
  }
  return out.str();
}

struct NamedMatrix {
  Matrix values;
  std::vector<std::string> names;
};

inline NamedMatrix parse_matrix_csv(std::istream& in, const std::string& source = "<stream>") {
  std::string line;
  if (!std::getline(in, line)) throw DataError(source + ": empty matrix file");
  auto header = detail::split_commas(line);
  if (header.size() < 2 || !header.front().empty())
    throw DataError(source + ": matrix header must start with an empty cell");
  std::vector<std::string> names(header.begin() + 1, header.end());
  const std::size_t f = names.size();
  Matrix m(f, f);
  std::size_t row = 0;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != f + 1 || row >= f)
      throw DataError(source + ": line " + std::to_string(line_no) + " does not fit a " +
                      std::to_string(f) + "x" + std::to_string(f) + " grid");
    for (std::size_t c = 0; c < f; ++c)
      if (!detail::parse_double(cells[c + 1], m(row, c)))
        throw DataError(source + ": line " + std::to_string(line_no) + ": cannot parse '" +
                        std::string(cells[c + 1]) + "'");
    ++row;
  }
  if (row != f) throw DataError(source + ": expected " + std::to_string(f) + " matrix rows");
  return {std::move(m), std::move(names)};
}

inline NamedMatrix load_matrix_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  return parse_matrix_csv(in, path.string());
}

}  // namespace mvfc
