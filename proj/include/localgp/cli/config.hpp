#pragma once

#include "localgp/local_design.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace localgp::cli {

inline constexpr Index kDefaultPrescaleSubset = 1000;

struct RunConfig {
  std::string command;  // gen, predict, surface, table

  // Data generation.
  std::string bench = "f2d";
  Index p = 0;          // zhou input dimension
  Index N = 1000;       // LHS design size
  Index test_size = 0;  // 0: same as N
  Index grid = 0;       // f2d only: side of the regular training grid, 0 for LHS

  SearchSpec spec;
  std::optional<Index> prescale;  // subset size when pre-scaling
  std::uint64_t seed = 1;
  unsigned workers = 1;

  std::string design;
  std::string test;
  std::string out;
  std::string trace;  // surface: trace CSV, default <out>.trace.csv

  std::vector<double> x_ref;  // surface reference location
  Index step = 6;             // surface: design size when the surface is taken

  std::string experiment;
  int reps = 0;  // table: Monte Carlo repeats, 0 for the experiment default

  // Every field as space-separated key=value pairs.
  std::string describe() const;
};

// Parses argv. Recognizes --help and --config <file> (key=value lines, '#'
// comments; command-line flags win). Throws CLI::Error subclasses on usage
// errors; `run_cli` maps them to exit codes.
RunConfig parse_args(int argc, const char* const* argv);

// Parses, runs and reports. Returns the process exit code: 0 success, 1 usage
// error, 2 data error, 3 numerical failure.
int run_cli(int argc, const char* const* argv);

}  // namespace localgp::cli
