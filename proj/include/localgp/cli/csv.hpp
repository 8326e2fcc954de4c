#pragma once

#include "localgp/types.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace localgp::cli {

struct CsvTable {
  std::vector<std::string> header;
  RowMatrix values;  // one record per row

  Index column(const std::string& name) const;  // -1 when absent
};

// Shortest text that round-trips the double exactly, at most 17 significant
// digits, '.' as the decimal point regardless of locale.
std::string format_double(double v);

// Numeric CSV with a mandatory header. Throws DataError carrying the path and
// line number on malformed input.
CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in, const std::string& source);

void write_csv(const std::string& path, const CsvTable& table);
void write_csv(std::ostream& out, const CsvTable& table);

// Design files are `x1..xp,y`.
Design read_design(const std::string& path);
CsvTable design_table(const Design& design);

// Predictive inputs: the x columns of a design-shaped file, or every column
// when there is no `y`. Truth is returned when a `y` column exists.
struct TestSet {
  RowMatrix X;
  std::optional<Vector> y;
};
TestSet read_test_set(const std::string& path);

std::vector<std::string> x_header(Index p);

}  // namespace localgp::cli
