#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "lipgm/numerics.hpp"

namespace lipgm {

struct Dataset {
  std::vector<std::string> names;  // one per column
  Matrix values;                   // rows are observations
};

/// Default column names x0, x1, ...
std::vector<std::string> default_column_names(std::size_t n);

/// CSV with a header row. Discrete data are written as integers, continuous
/// data with 17 significant digits.
void write_csv(std::ostream& out, const Dataset& d, bool discrete = false);
void write_csv(const std::filesystem::path& path, const Dataset& d, bool discrete = false);
/// Throws MalformedField on ragged rows or unparsable numbers.
Dataset read_csv(std::istream& in);
Dataset read_csv(const std::filesystem::path& path);

}  // namespace lipgm
