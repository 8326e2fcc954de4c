#include "localgp/cli/experiments.hpp"

#include "localgp/cli/config.hpp"
#include "localgp/neighbors.hpp"
#include "localgp/prediction.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace localgp::cli {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string count(Index v) { return std::to_string(v); }

CellResult summarize(const BatchResult& batch, const Problem& problem) {
  const Metrics m = metrics(batch, problem.test_y);
  CellResult r;
  r.seconds = batch.seconds;
  r.rmse = m.rmse;
  r.mse = m.mse;
  r.mean_sd = m.mean_sd;
  r.coverage95 = m.coverage95;
  r.failures = batch.failed_count();
  return r;
}

SearchSpec local_spec(SearchMethod method, Index n, int stages, double eta) {
  SearchSpec s;
  s.method = method;
  s.n = n;
  s.stages = stages;
  s.eta = eta;
  return s;
}

// 2-d synthetic comparators, sorted by out-of-sample RMSE.
Report table1(const ExperimentOptions& opt) {
  const Problem problem = f2d_grid_problem();
  std::vector<CellResult> cells;
  auto ray = [&](Index n, int stages) {
    SearchSpec s = local_spec(SearchMethod::AlcRay, n, stages, opt.eta);
    s.num_rays = 1;
    return s;
  };
  const std::vector<SearchSpec> specs{
      ray(200, 2),
      ray(200, 1),
      ray(50, 2),
      local_spec(SearchMethod::AlcExhaustive, 50, 2, opt.eta),
      ray(50, 1),
      local_spec(SearchMethod::NearestNeighbor, 200, 1, opt.eta),
      local_spec(SearchMethod::AlcExhaustive, 50, 1, opt.eta),
      local_spec(SearchMethod::NearestNeighbor, 50, 1, opt.eta),
  };
  for (const SearchSpec& s : specs) cells.push_back(run_local(problem, s, opt.workers));
  cells.push_back(run_subset(problem, 1000, derive_seed(opt.seed, 1), opt.eta, false));
  std::stable_sort(cells.begin(), cells.end(),
                   [](const CellResult& a, const CellResult& b) { return a.rmse < b.rmse; });

  Report report{{"method", "n", "stage", "seconds", "rmse", "sd", "coverage95", "failures"}, {}};
  for (const CellResult& c : cells) {
    const bool greedy = c.method == "alc-ex" || c.method == "alc-ray";
    report.rows.push_back({c.method, count(c.n), greedy ? std::to_string(c.stages) : "",
                           fixed(c.seconds, 1), fixed(c.rmse, 4), fixed(c.mean_sd, 4),
                           fixed(c.coverage95, 2), count(c.failures)});
  }
  return report;
}

struct BoreholeRow {
  Index N;
  Index n;
  Index n_prime;
};

const std::vector<BoreholeRow>& borehole_rows() {
  static const std::vector<BoreholeRow> rows{
      {1000, 40, 100}, {2000, 42, 150}, {4000, 44, 225}, {8000, 46, 338}, {16000, 48, 507}};
  return rows;
}

// Exhaustive and ray searches on growing borehole designs.
Report table3_desk(const ExperimentOptions& opt) {
  const bench::BenchFn fn = bench::lookup("borehole");
  Report report{{"N", "n", "nprime", "method", "seconds", "mse", "sd", "coverage95", "failures"},
                {}};
  for (const BoreholeRow& row : borehole_rows()) {
    const Problem problem = lhs_problem(fn, row.N, row.N, derive_seed(opt.seed, row.N));
    SearchSpec ex = local_spec(SearchMethod::AlcExhaustive, row.n, 1, opt.eta);
    ex.n_prime = row.n_prime;
    const SearchSpec ray = local_spec(SearchMethod::AlcRay, row.n, 1, opt.eta);
    for (const SearchSpec& s : {ex, ray}) {
      const CellResult c = run_local(problem, s, opt.workers);
      report.rows.push_back({count(row.N), count(row.n),
                             s.method == SearchMethod::AlcExhaustive ? count(row.n_prime) : "",
                             c.method, fixed(c.seconds, 2), fixed(c.mse, 2), fixed(c.mean_sd, 3),
                             fixed(c.coverage95, 3), count(c.failures)});
    }
  }
  return report;
}

// Global subset GPs against rays on pre-scaled inputs.
Report table4_desk(const ExperimentOptions& opt) {
  const bench::BenchFn fn = bench::lookup("borehole");
  Report report{{"N", "method", "n", "seconds", "mse", "sd", "coverage95", "failures"}, {}};
  for (const BoreholeRow& row : borehole_rows()) {
    const Problem problem = lhs_problem(fn, row.N, row.N, derive_seed(opt.seed, row.N));
    const Index subset = std::min<Index>(kDefaultPrescaleSubset, row.N);
    const std::uint64_t sub_seed = derive_seed(opt.seed, row.N, 1);
    std::vector<CellResult> cells{
        run_subset(problem, subset, sub_seed, opt.eta, false),
        run_subset(problem, subset, sub_seed, opt.eta, true),
        run_local(problem, local_spec(SearchMethod::AlcRay, row.n, 1, opt.eta), opt.workers,
                  subset, sub_seed),
    };
    for (const CellResult& c : cells) {
      report.rows.push_back({count(row.N), c.prescaled ? "alc-ray-prescaled" : c.method,
                             count(c.n), fixed(c.seconds, 2), fixed(c.mse, 2),
                             fixed(c.mean_sd, 3), fixed(c.coverage95, 3), count(c.failures)});
    }
  }
  return report;
}

// Ray-count study on the Zhou function: mean RMSE over repeats, normalized
// per dimension by the best ray count.
Report zhou_rays(const ExperimentOptions& opt) {
  constexpr Index kN = 10000;
  constexpr Index kTest = 1000;
  const int reps = opt.reps > 0 ? opt.reps : 10;
  Report report{{"p", "rays", "reps", "rmse", "normalized_rmse", "seconds", "failures"}, {}};
  for (Index p = 2; p <= 9; ++p) {
    const bench::BenchFn fn = bench::lookup("zhou", p);
    std::vector<double> rmse(static_cast<std::size_t>(p), 0.0);
    std::vector<double> secs(static_cast<std::size_t>(p), 0.0);
    std::vector<Index> failed(static_cast<std::size_t>(p), 0);
    for (int rep = 0; rep < reps; ++rep) {
      const Problem problem =
          lhs_problem(fn, kN, kTest, derive_seed(opt.seed, static_cast<std::uint64_t>(p),
                                                 static_cast<std::uint64_t>(rep)));
      for (Index rays = 1; rays <= p; ++rays) {
        SearchSpec s = local_spec(SearchMethod::AlcRay, 50, 1, opt.eta);
        s.num_rays = rays;
        const CellResult c = run_local(problem, s, opt.workers);
        const auto k = static_cast<std::size_t>(rays - 1);
        rmse[k] += c.rmse / reps;
        secs[k] += c.seconds / reps;
        failed[k] += c.failures;
      }
    }
    const double best = *std::min_element(rmse.begin(), rmse.end());
    for (Index rays = 1; rays <= p; ++rays) {
      const auto k = static_cast<std::size_t>(rays - 1);
      report.rows.push_back({count(p), count(rays), std::to_string(reps), fixed(rmse[k], 5),
                             fixed(rmse[k] / best, 3), fixed(secs[k], 2), count(failed[k])});
    }
  }
  return report;
}

}  // namespace

Problem f2d_grid_problem(Index m) {
  const bench::BenchFn fn = bench::lookup("f2d");
  Problem problem;
  problem.train = bench::make_design(fn, bench::grid2d(m, -2.0, 2.0));
  problem.test_X = bench::offset_test_grid();
  problem.test_y = fn.evaluate_rows(problem.test_X);
  return problem;
}

Problem lhs_problem(const bench::BenchFn& fn, Index N, Index M, std::uint64_t seed) {
  const RowMatrix joint = bench::lhs(N + M, fn.dim, fn.design_box(), seed);
  Problem problem;
  problem.train = bench::make_design(fn, joint.topRows(N));
  problem.test_X = joint.bottomRows(M);
  problem.test_y = fn.evaluate_rows(problem.test_X);
  return problem;
}

CellResult run_local(const Problem& problem, const SearchSpec& spec, unsigned workers,
                     std::optional<Index> prescale_subset, std::uint64_t prescale_seed) {
  const auto start = std::chrono::steady_clock::now();
  std::optional<Prescaled> scaled;
  if (prescale_subset) {
    scaled = prescale(problem.train, *prescale_subset, prescale_seed, spec.eta);
  }
  const double fit_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const Design& design = scaled ? scaled->design : problem.train;
  const RowMatrix test_X = scaled ? scaled->scale.apply(problem.test_X) : problem.test_X;
  const NeighborIndex index(design.X);
  const SearchContext ctx(design, index);
  const BatchResult batch = predict_set(test_X, ctx, spec, workers);

  CellResult r = summarize(batch, problem);
  r.method = std::string(to_string(spec.method));
  r.N = design.size();
  r.n = spec.n;
  r.n_prime = batch.spec.n_prime;
  r.rays = batch.spec.num_rays.value_or(0);
  r.stages = spec.stages;
  r.prescaled = scaled.has_value();
  r.seconds += fit_seconds;
  return r;
}

CellResult run_subset(const Problem& problem, Index subset_size, std::uint64_t seed, double eta,
                      bool separable) {
  const BatchResult batch =
      predict_subset_gp(problem.train, problem.test_X, subset_size, seed, eta, separable);
  CellResult r = summarize(batch, problem);
  r.method = separable ? "sub-sep" : "sub";
  r.N = problem.train.size();
  r.n = subset_size;
  return r;
}

void write_report(std::ostream& out, const Report& report) {
  for (std::size_t c = 0; c < report.header.size(); ++c) {
    out << (c ? "," : "") << report.header[c];
  }
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
    out << '\n';
  }
}

std::vector<std::string> experiment_names() {
  return {"table1", "table3-desk", "table4-desk", "zhou-rays"};
}

Report run_experiment(const std::string& name, const ExperimentOptions& options) {
  if (name == "table1") return table1(options);
  if (name == "table3-desk") return table3_desk(options);
  if (name == "table4-desk") return table4_desk(options);
  if (name == "zhou-rays") return zhou_rays(options);
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a simple combination.
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (a + 1) + 0xbf58476d1ce4e5b9ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace localgp::cli
