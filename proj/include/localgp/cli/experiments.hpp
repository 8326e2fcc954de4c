#pragma once

#include "localgp/bench.hpp"
#include "localgp/local_design.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace localgp::cli {

// Training design plus a predictive set with known truth.
struct Problem {
  Design train;
  RowMatrix test_X;
  Vector test_y;
};

// f2d on the m x m grid over [-2, 2]^2, predicted on the offset 99 x 99 grid.
Problem f2d_grid_problem(Index m = 201);

// Joint LHS of N + M points in the benchmark's design box; the first N rows
// train, the last M test.
Problem lhs_problem(const bench::BenchFn& fn, Index N, Index M, std::uint64_t seed);

struct CellResult {
  std::string method;  // nn, alc-ex, alc-ray, sub, sub-sep
  Index N = 0;
  Index n = 0;
  Index n_prime = 0;
  Index rays = 0;
  int stages = 0;
  bool prescaled = false;
  double seconds = 0.0;  // prediction loop, plus the subset fit for sub/pre-scaling
  double rmse = 0.0;
  double mse = 0.0;
  double mean_sd = 0.0;
  double coverage95 = 0.0;
  Index failures = 0;
};

CellResult run_local(const Problem& problem, const SearchSpec& spec, unsigned workers,
                     std::optional<Index> prescale_subset = std::nullopt,
                     std::uint64_t prescale_seed = 0);

CellResult run_subset(const Problem& problem, Index subset_size, std::uint64_t seed, double eta,
                      bool separable);

// Nugget used by the experiment drivers unless one is given explicitly.
inline constexpr double kExperimentNugget = 1e-3;

struct ExperimentOptions {
  unsigned workers = 1;
  std::uint64_t seed = 1;
  int reps = 0;  // 0: experiment default
  double eta = kExperimentNugget;
};

struct Report {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_report(std::ostream& out, const Report& report);

// Named drivers: table1, table3-desk, table4-desk, zhou-rays.
Report run_experiment(const std::string& name, const ExperimentOptions& options);
std::vector<std::string> experiment_names();

// Independent stream seed for (base, a, b).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace localgp::cli
