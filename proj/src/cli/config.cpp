#include "localgp/cli/config.hpp"

#include "localgp/cli/commands.hpp"
#include "localgp/cli/csv.hpp"
#include "localgp/cli/experiments.hpp"
#include "localgp/gp_state.hpp"
#include "localgp/optim1d.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <sstream>

namespace localgp::cli {

std::string RunConfig::describe() const {
  std::ostringstream s;
  s << "command=" << command << " bench=" << bench << " p=" << p << " N=" << N
    << " test_size=" << test_size << " grid=" << grid << " method=" << to_string(spec.method)
    << " n0=" << spec.n0 << " n=" << spec.n << " nprime=" << spec.n_prime
    << " rays=" << (spec.num_rays ? std::to_string(*spec.num_rays) : "p")
    << " stages=" << spec.stages
    << " theta=" << (spec.fixed_theta ? format_double(*spec.fixed_theta) : "mle")
    << " eta=" << format_double(spec.eta)
    << " prescale=" << (prescale ? std::to_string(*prescale) : "off") << " seed=" << seed
    << " workers=" << workers << " design=" << (design.empty() ? "-" : design)
    << " test=" << (test.empty() ? "-" : test) << " out=" << (out.empty() ? "-" : out);
  if (command == "surface") {
    s << " x=";
    for (std::size_t k = 0; k < x_ref.size(); ++k) s << (k ? "," : "") << format_double(x_ref[k]);
    s << " step=" << step;
  }
  if (command == "table") s << " experiment=" << experiment << " reps=" << reps;
  return s.str();
}

namespace {

struct RawArgs {
  std::string method = "alc-ray";
  Index rays = 0;
  std::string theta = "mle";
  std::vector<std::string> prescale;
};

void setup(CLI::App& app, RunConfig& c, RawArgs& raw) {
  app.set_config("--config", "", "key=value file; command-line flags take precedence");
  app.add_option("command", c.command, "gen | predict | surface | table")
      ->required()
      ->check(CLI::IsMember({"gen", "predict", "surface", "table"}));

  app.add_option("--bench", c.bench, "benchmark: f2d, borehole, piston, zhou")->capture_default_str();
  app.add_option("--p", c.p, "zhou input dimension");
  app.add_option("--N", c.N, "LHS design size")->capture_default_str();
  app.add_option("--test-size", c.test_size, "LHS test size (default N)");
  app.add_option("--grid", c.grid, "f2d: regular training grid side");

  app.add_option("--method", raw.method, "nn | alc-ex | alc-ray")
      ->check(CLI::IsMember({"nn", "alc-ex", "alc-ray"}))
      ->capture_default_str();
  app.add_option("--n", c.spec.n, "local design size")->capture_default_str();
  app.add_option("--n0", c.spec.n0, "initial nearest neighbors")->capture_default_str();
  app.add_option("--nprime", c.spec.n_prime, "alc-ex candidate pool")->capture_default_str();
  app.add_option("--rays", raw.rays, "rays per greedy step (default p)");
  app.add_option("--stages", c.spec.stages, "1 or 2")->check(CLI::IsMember({1, 2}))->capture_default_str();
  app.add_option("--eta", c.spec.eta, "nugget")->capture_default_str();
  app.add_option("--theta", raw.theta, "mle or a fixed lengthscale")->capture_default_str();
  app.add_option("--prescale", raw.prescale, "pre-scale inputs; optional subset size")
      ->expected(0, 1);
  app.add_option("--seed", c.seed, "random seed")->capture_default_str();
  app.add_option("--workers", c.workers, "prediction threads")->capture_default_str();

  app.add_option("--design", c.design, "design CSV (x1..xp,y)");
  app.add_option("--test", c.test, "predictive set CSV; gen writes it");
  app.add_option("--out", c.out, "output path");
  app.add_option("--trace", c.trace, "surface: trace CSV path");
  app.add_option("--x", c.x_ref, "surface: reference location x1,x2")->delimiter(',');
  app.add_option("--step", c.step, "surface: design size j")->capture_default_str();
  app.add_option("--experiment", c.experiment, "table: table1, table3-desk, table4-desk, zhou-rays");
  app.add_option("--reps", c.reps, "table: Monte Carlo repeats");
}

void finish(CLI::App& app, RunConfig& c, const RawArgs& raw) {
  c.spec.method = parse_method(raw.method);
  if (raw.rays < 0) throw CLI::ValidationError("--rays", "must be positive");
  if (raw.rays > 0) c.spec.num_rays = raw.rays;
  if (raw.theta != "mle") {
    double v = 0.0;
    const auto res = std::from_chars(raw.theta.data(), raw.theta.data() + raw.theta.size(), v);
    if (res.ec != std::errc{} || res.ptr != raw.theta.data() + raw.theta.size() || !(v > 0.0)) {
      throw CLI::ValidationError("--theta", "expected 'mle' or a positive number");
    }
    c.spec.fixed_theta = v;
  }
  if (app.count("--prescale") > 0) {
    Index subset = kDefaultPrescaleSubset;
    if (!raw.prescale.empty() && !raw.prescale.back().empty()) {
      const std::string& s = raw.prescale.back();
      const auto res = std::from_chars(s.data(), s.data() + s.size(), subset);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || subset < 2) {
        throw CLI::ValidationError("--prescale", "subset size must be an integer >= 2");
      }
    }
    c.prescale = subset;
  }
  if (c.workers < 1) throw CLI::ValidationError("--workers", "must be at least 1");
  if (c.command == "table" && app.count("--eta") == 0) c.spec.eta = kExperimentNugget;
}

}  // namespace

RunConfig parse_args(int argc, const char* const* argv) {
  CLI::App app{"Local approximate GP prediction"};
  RunConfig config;
  RawArgs raw;
  setup(app, config, raw);
  app.parse(argc, argv);
  finish(app, config, raw);
  return config;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Local approximate GP prediction"};
  RunConfig config;
  RawArgs raw;
  setup(app, config, raw);
  try {
    app.parse(argc, argv);
    finish(app, config, raw);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  try {
    run_command(config, std::cout);
    return 0;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace localgp::cli
