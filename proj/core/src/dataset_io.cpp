#include "lipgm/dataset_io.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "lipgm/errors.hpp"

namespace lipgm {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

void strip_cr(std::string& line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
}

}  // namespace

std::vector<std::string> default_column_names(std::size_t n) {
  std::vector<std::string> names;
  names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) names.push_back("x" + std::to_string(i));
  return names;
}

void write_csv(std::ostream& out, const Dataset& d, bool discrete) {
  require(d.names.size() == d.values.cols(), ErrorCode::DimensionMismatch,
          "write_csv: header length does not match column count");
  for (std::size_t c = 0; c < d.names.size(); ++c) out << (c ? "," : "") << d.names[c];
  out << '\n';
  for (std::size_t r = 0; r < d.values.rows(); ++r) {
    for (std::size_t c = 0; c < d.values.cols(); ++c) {
      const double v = d.values(r, c);
      if (c) out << ',';
      out << (discrete ? fmt::format("{}", static_cast<long long>(v)) : fmt::format("{:.17g}", v));
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& d, bool discrete) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  write_csv(out, d, discrete);
}

Dataset read_csv(std::istream& in) {
  Dataset d;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorCode::MalformedField, "read_csv: missing header row");
  strip_cr(line);
  d.names = split(line);
  std::vector<Vec> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    strip_cr(line);
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != d.names.size())
      fail(ErrorCode::MalformedField, "read_csv: line " + std::to_string(lineno) + " has " +
                                          std::to_string(cells.size()) + " fields, header has " +
                                          std::to_string(d.names.size()));
    Vec row(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const std::string& s = cells[c];
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), row[c]);
      if (ec != std::errc() || ptr != s.data() + s.size())
        fail(ErrorCode::MalformedField, "read_csv: line " + std::to_string(lineno) + ": '" + s + "' is not a number");
    }
    rows.push_back(std::move(row));
  }
  d.values = rows.empty() ? Matrix(0, d.names.size()) : Matrix::from_rows(rows);
  return d;
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::Io, "cannot open " + path.string());
  return read_csv(in);
}

}  // namespace lipgm
