#include "localgp/cli/commands.hpp"

#include "localgp/alc.hpp"
#include "localgp/bench.hpp"
#include "localgp/cli/csv.hpp"
#include "localgp/cli/experiments.hpp"
#include "localgp/neighbors.hpp"
#include "localgp/prediction.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace localgp::cli {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument(what);
}

std::string metric_text(const Metrics& m) {
  std::ostringstream s;
  s << " rmse=" << format_double(m.rmse) << " mse=" << format_double(m.mse)
    << " mean_sd=" << format_double(m.mean_sd) << " coverage95=" << format_double(m.coverage95)
    << " scored=" << m.count;
  return s.str();
}

}  // namespace

void cmd_gen(const RunConfig& config, std::ostream& log) {
  require(!config.out.empty(), "gen: --out is required");
  const bench::BenchFn fn = bench::lookup(config.bench, config.p);
  Design train;
  std::optional<Design> test;
  if (config.grid > 0) {
    require(config.bench == "f2d", "gen: --grid applies to f2d only");
    train = bench::make_design(fn, bench::grid2d(config.grid, -2.0, 2.0));
    if (!config.test.empty()) test = bench::make_design(fn, bench::offset_test_grid());
  } else {
    require(config.N >= 1, "gen: --N must be positive");
    const Index M = config.test.empty() ? 0 : (config.test_size > 0 ? config.test_size : config.N);
    const RowMatrix joint = bench::lhs(config.N + M, fn.dim, fn.design_box(), config.seed);
    train = bench::make_design(fn, joint.topRows(config.N));
    if (M > 0) test = bench::make_design(fn, joint.bottomRows(M));
  }
  write_csv(config.out, design_table(train));
  if (test) write_csv(config.test, design_table(*test));
  log << "summary " << config.describe() << " rows=" << train.size()
      << " test_rows=" << (test ? test->size() : 0) << '\n';
}

void cmd_predict(const RunConfig& config, std::ostream& log) {
  require(!config.design.empty(), "predict: --design is required");
  require(!config.test.empty(), "predict: --test is required");
  require(!config.out.empty(), "predict: --out is required");
  const Design raw = read_design(config.design);
  const TestSet test = read_test_set(config.test);
  if (test.X.cols() != raw.dim()) {
    throw DataError("predict: test set has " + std::to_string(test.X.cols()) +
                    " inputs but the design has " + std::to_string(raw.dim()));
  }

  std::optional<Prescaled> scaled;
  if (config.prescale) {
    scaled = prescale(raw, std::min(*config.prescale, raw.size()), config.seed, config.spec.eta);
  }
  const Design& design = scaled ? scaled->design : raw;
  const RowMatrix X_ref = scaled ? scaled->scale.apply(test.X) : test.X;

  const NeighborIndex index(design.X);
  const SearchContext ctx(design, index);
  const BatchResult batch = predict_set(X_ref, ctx, config.spec, config.workers);

  CsvTable out;
  out.header = x_header(raw.dim());
  for (const char* h : {"mean", "s2", "df", "lower95", "upper95"}) out.header.emplace_back(h);
  const Index p = raw.dim();
  out.values.resize(test.X.rows(), p + 5);
  out.values.leftCols(p) = test.X;
  for (Index i = 0; i < test.X.rows(); ++i) {
    const Prediction& pr = batch.predictions[static_cast<std::size_t>(i)];
    out.values(i, p) = pr.mean;
    out.values(i, p + 1) = pr.scale;
    out.values(i, p + 2) = pr.df;
    out.values(i, p + 3) = pr.lower95;
    out.values(i, p + 4) = pr.upper95;
  }
  write_csv(config.out, out);

  const SearchSpec& s = batch.spec;
  log << "summary " << config.describe() << " resolved_rays=" << s.num_rays.value_or(0);
  if (s.bounds) {
    log << " theta_lo=" << format_double(s.bounds->lo) << " theta_hi=" << format_double(s.bounds->hi)
        << " theta_init=" << format_double(s.bounds->init);
  }
  if (scaled) {
    log << " scale=";
    for (std::size_t k = 0; k < scaled->scale.divisors.size(); ++k) {
      log << (k ? ";" : "") << format_double(scaled->scale.divisors[k]);
    }
  }
  log << " seconds=" << format_double(batch.seconds) << " failures=" << batch.failed_count();
  if (test.y) log << metric_text(metrics(batch, *test.y));
  log << '\n';
  for (std::size_t i = 0; i < batch.failures.size(); ++i) {
    if (!batch.failures[i].empty()) {
      std::cerr << "location " << i + 1 << " failed: " << batch.failures[i] << '\n';
    }
  }
}

void cmd_surface(const RunConfig& config, std::ostream& log) {
  require(!config.design.empty(), "surface: --design is required");
  require(!config.out.empty(), "surface: --out is required");
  const Design design = read_design(config.design);
  if (design.dim() != 2) {
    throw std::invalid_argument("surface: needs a 2-d design, got p=" +
                                std::to_string(design.dim()));
  }
  require(config.x_ref.size() == 2, "surface: --x takes two comma-separated coordinates");
  const Point x(config.x_ref.data(), 2);

  SearchSpec spec = config.spec;
  spec.method = SearchMethod::AlcExhaustive;
  spec.n = config.step;
  spec.n_prime = std::max(spec.n_prime, spec.n);
  const double theta =
      spec.fixed_theta ? *spec.fixed_theta : default_theta0(design.X).init;

  const NeighborIndex index(design.X);
  const SearchContext ctx(design, index);
  const LocalDesign local = build_alc_ex_partial(x, ctx, spec, theta, config.step);

  std::vector<char> used(static_cast<std::size_t>(design.size()), 0);
  for (Index r : local.trace.order) used[static_cast<std::size_t>(r)] = 1;
  RowMatrix cand(design.size() - static_cast<Index>(local.trace.order.size()), 2);
  for (Index r = 0, i = 0; r < design.size(); ++r) {
    if (!used[static_cast<std::size_t>(r)]) cand.row(i++) = design.X.row(r);
  }
  const Vector alc = alc_batch(local.state, cand, x);

  CsvTable surface;
  surface.header = {"x1", "x2", "alc"};
  surface.values.resize(cand.rows(), 3);
  surface.values.leftCols(2) = cand;
  surface.values.col(2) = alc;
  write_csv(config.out, surface);

  const std::string trace_path = config.trace.empty() ? config.out + ".trace.csv" : config.trace;
  std::ofstream trace(trace_path, std::ios::binary);
  if (!trace) throw DataError("cannot open '" + trace_path + "' for writing");
  trace << "step,row,x1,x2,origin\n";
  for (std::size_t k = 0; k < local.trace.order.size(); ++k) {
    const Index r = local.trace.order[k];
    trace << k + 1 << ',' << r + 1 << ',' << format_double(design.X(r, 0)) << ','
          << format_double(design.X(r, 1)) << ',' << to_string(local.trace.origin[k]) << '\n';
  }
  if (!trace) throw DataError("write to '" + trace_path + "' failed");

  Index best = 0;
  for (Index i = 1; i < alc.size(); ++i) {
    if (alc[i] > alc[best]) best = i;
  }
  log << "summary " << config.describe() << " theta=" << format_double(theta)
      << " candidates=" << cand.rows() << " argmax_x1=" << format_double(cand(best, 0))
      << " argmax_x2=" << format_double(cand(best, 1)) << " max_alc=" << format_double(alc[best])
      << '\n';
}

void cmd_table(const RunConfig& config, std::ostream& log) {
  require(!config.experiment.empty(), "table: --experiment is required");
  ExperimentOptions opt;
  opt.workers = config.workers;
  opt.seed = config.seed;
  opt.reps = config.reps;
  opt.eta = config.spec.eta;
  const Report report = run_experiment(config.experiment, opt);
  if (config.out.empty()) {
    write_report(log, report);
  } else {
    std::ofstream out(config.out, std::ios::binary);
    if (!out) throw DataError("cannot open '" + config.out + "' for writing");
    write_report(out, report);
    if (!out) throw DataError("write to '" + config.out + "' failed");
  }
  log << "summary " << config.describe() << " rows=" << report.rows.size() << '\n';
}

void run_command(const RunConfig& config, std::ostream& log) {
  if (config.command == "gen") return cmd_gen(config, log);
  if (config.command == "predict") return cmd_predict(config, log);
  if (config.command == "surface") return cmd_surface(config, log);
  if (config.command == "table") return cmd_table(config, log);
  throw std::invalid_argument("unknown command '" + config.command + "'");
}

}  // namespace localgp::cli
