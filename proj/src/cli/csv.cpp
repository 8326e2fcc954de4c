#include "localgp/cli/csv.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>
#include <string_view>

namespace localgp::cli {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
  throw DataError(source + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Index CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<Index>(i);
  }
  return -1;
}

std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

CsvTable parse_csv(std::istream& in, const std::string& source) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!trim(line).empty()) break;
  }
  if (trim(line).empty()) fail(source, lineno, "missing header row");
  for (auto f : split(line)) {
    if (f.empty()) fail(source, lineno, "empty column name");
    table.header.emplace_back(f);
  }
  const std::size_t cols = table.header.size();

  std::vector<double> flat;
  Index rows = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const auto fields = split(line);
    if (fields.size() != cols) {
      fail(source, lineno,
           "expected " + std::to_string(cols) + " fields, found " + std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < cols; ++c) {
      const auto f = fields[c];
      double v = 0.0;
      const auto res = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || res.ec != std::errc{} || res.ptr != f.data() + f.size()) {
        fail(source, lineno,
             "column '" + table.header[c] + "': cannot parse '" + std::string(f) + "'");
      }
      flat.push_back(v);
    }
    ++rows;
  }
  table.values = Eigen::Map<RowMatrix>(flat.data(), rows, static_cast<Index>(cols));
  return table;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  return parse_csv(in, path);
}

void write_csv(std::ostream& out, const CsvTable& table) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    out << (c ? "," : "") << table.header[c];
  }
  out << '\n';
  for (Index r = 0; r < table.values.rows(); ++r) {
    for (Index c = 0; c < table.values.cols(); ++c) {
      out << (c ? "," : "") << format_double(table.values(r, c));
    }
    out << '\n';
  }
}

void write_csv(const std::string& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  write_csv(out, table);
  out.flush();
  if (!out) throw DataError("write to '" + path + "' failed");
}

std::vector<std::string> x_header(Index p) {
  std::vector<std::string> h;
  for (Index k = 1; k <= p; ++k) h.push_back("x" + std::to_string(k));
  return h;
}

Design read_design(const std::string& path) {
  const CsvTable t = read_csv(path);
  const Index cols = static_cast<Index>(t.header.size());
  if (cols < 2 || t.header.back() != "y") {
    throw DataError(path + ": design header must be x1..xp,y");
  }
  if (t.values.rows() < 1) throw DataError(path + ": design has no rows");
  Design d;
  d.X = t.values.leftCols(cols - 1);
  d.Y = t.values.col(cols - 1);
  return d;
}

CsvTable design_table(const Design& design) {
  CsvTable t;
  t.header = x_header(design.dim());
  t.header.emplace_back("y");
  t.values.resize(design.size(), design.dim() + 1);
  t.values.leftCols(design.dim()) = design.X;
  t.values.col(design.dim()) = design.Y;
  return t;
}

TestSet read_test_set(const std::string& path) {
  const CsvTable t = read_csv(path);
  if (t.values.rows() < 1) throw DataError(path + ": no predictive locations");
  TestSet s;
  const Index y = t.column("y");
  if (y < 0) {
    s.X = t.values;
    return s;
  }
  if (y != t.values.cols() - 1) throw DataError(path + ": 'y' must be the last column");
  s.X = t.values.leftCols(y);
  s.y = Vector(t.values.col(y));
  return s;
}

}  // namespace localgp::cli
