#include "localgp/cli/commands.hpp"
#include "localgp/cli/config.hpp"
#include "localgp/cli/csv.hpp"
#include "localgp/cli/experiments.hpp"
#include "localgp/neighbors.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

using namespace localgp;
using namespace localgp::cli;
namespace fs = std::filesystem;

namespace {

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("localgp_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  static int run(std::vector<std::string> args) {
    args.insert(args.begin(), "localgp");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
  }

  static std::string slurp(const std::string& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  }

  fs::path dir_;
};

RunConfig parse(std::vector<std::string> args) {
  args.insert(args.begin(), "localgp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  return parse_args(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST(Csv, RoundTripIsExact) {
  oracle::Gen g(91);
  CsvTable t;
  t.header = {"x1", "x2", "y"};
  t.values.resize(200, 3);
  for (Index i = 0; i < 200; ++i) {
    for (Index j = 0; j < 3; ++j) t.values(i, j) = std::ldexp(g.unif(-1.0, 1.0), static_cast<int>(g.integer(-300, 300)));
  }
  t.values(0, 0) = std::numeric_limits<double>::denorm_min();
  t.values(0, 1) = std::numeric_limits<double>::max();
  t.values(0, 2) = -0.0;
  t.values(1, 0) = 0.1;
  std::stringstream s;
  write_csv(s, t);
  const CsvTable back = parse_csv(s, "mem");
  EXPECT_EQ(back.header, t.header);
  ASSERT_EQ(back.values.rows(), 200);
  for (Index i = 0; i < 200; ++i) {
    for (Index j = 0; j < 3; ++j) EXPECT_EQ(back.values(i, j), t.values(i, j));
  }
  EXPECT_EQ(format_double(0.1), "0.1");
  EXPECT_LE(format_double(1.0 / 3.0).size(), 20u);
}

TEST(Csv, ParseErrorsCarryLineNumbers) {
  std::istringstream bad("x1,y\n1,2\n3,oops\n");
  try {
    parse_csv(bad, "f.csv");
    FAIL() << "expected a parse error";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("f.csv:3"), std::string::npos) << e.what();
  }
  std::istringstream ragged("x1,y\n1,2\n3\n");
  EXPECT_THROW(parse_csv(ragged, "g.csv"), DataError);
  std::istringstream empty("");
  EXPECT_THROW(parse_csv(empty, "h.csv"), DataError);
}

TEST(Config, Flags) {
  const RunConfig c = parse({"predict", "--method", "alc-ex", "--n", "40", "--n0", "8", "--nprime",
                             "500", "--rays", "3", "--stages", "2", "--eta", "1e-6", "--theta",
                             "0.25", "--prescale", "--seed", "9", "--workers", "4"});
  EXPECT_EQ(c.command, "predict");
  EXPECT_EQ(c.spec.method, SearchMethod::AlcExhaustive);
  EXPECT_EQ(c.spec.n, 40);
  EXPECT_EQ(c.spec.n0, 8);
  EXPECT_EQ(c.spec.n_prime, 500);
  EXPECT_EQ(c.spec.num_rays.value(), 3);
  EXPECT_EQ(c.spec.stages, 2);
  EXPECT_EQ(c.spec.eta, 1e-6);
  EXPECT_EQ(c.spec.fixed_theta.value(), 0.25);
  EXPECT_EQ(c.prescale.value(), kDefaultPrescaleSubset);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(c.workers, 4u);
  EXPECT_EQ(parse({"predict", "--prescale=250"}).prescale.value(), 250);
}

TEST(Config, Defaults) {
  const RunConfig c = parse({"predict"});
  EXPECT_EQ(c.spec.n0, 6);
  EXPECT_EQ(c.spec.n_prime, 1000);
  EXPECT_FALSE(c.spec.num_rays.has_value());
  EXPECT_EQ(c.spec.eta, 1e-10);
  EXPECT_TRUE(c.spec.mle());
  EXPECT_FALSE(c.prescale.has_value());
}

TEST(Config, TableUsesTheExperimentNuggetUnlessGiven) {
  EXPECT_EQ(parse({"table", "--experiment", "table1"}).spec.eta, kExperimentNugget);
  EXPECT_EQ(parse({"table", "--experiment", "table1", "--eta", "1e-6"}).spec.eta, 1e-6);
  EXPECT_EQ(parse({"predict"}).spec.eta, 1e-10);
}

TEST_F(Cli, ConfigFileWithOverrides) {
  {
    std::ofstream f(path("run.conf"));
    f << "# comment\nmethod=nn\nn=33\nseed=5\n";
  }
  const RunConfig c = parse({"predict", "--config", path("run.conf"), "--n", "44"});
  EXPECT_EQ(c.spec.method, SearchMethod::NearestNeighbor);
  EXPECT_EQ(c.spec.n, 44);
  EXPECT_EQ(c.seed, 5u);
}

TEST_F(Cli, ExitCodes) {
  EXPECT_EQ(run({"predict", "--method", "bogus"}), 1);
  EXPECT_EQ(run({"frobnicate"}), 1);
  EXPECT_EQ(run({"predict", "--design", path("missing.csv"), "--test", path("missing.csv"), "--out",
                 path("o.csv")}),
            2);
  EXPECT_EQ(run({"gen", "--bench", "nope", "--out", path("d.csv")}), 1);
  EXPECT_EQ(run({"table", "--experiment", "table9"}), 1);
  EXPECT_EQ(run({"gen", "--bench", "borehole", "--N", "10", "--out", (dir_ / "no" / "d.csv").string()}), 2);
}

TEST_F(Cli, GenIsDeterministic) {
  ASSERT_EQ(run({"gen", "--bench", "borehole", "--N", "1000", "--seed", "7", "--out", path("a.csv"),
                 "--test", path("ta.csv")}),
            0);
  ASSERT_EQ(run({"gen", "--bench", "borehole", "--N", "1000", "--seed", "7", "--out", path("b.csv"),
                 "--test", path("tb.csv")}),
            0);
  EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv")));
  EXPECT_EQ(slurp(path("ta.csv")), slurp(path("tb.csv")));
  const Design d = read_design(path("a.csv"));
  EXPECT_EQ(d.size(), 1000);
  EXPECT_EQ(d.dim(), 8);
}

TEST_F(Cli, GenShapes) {
  ASSERT_EQ(run({"gen", "--bench", "f2d", "--grid", "201", "--out", path("grid.csv")}), 0);
  EXPECT_EQ(read_design(path("grid.csv")).size(), 40401);
  ASSERT_EQ(run({"gen", "--bench", "zhou", "--p", "9", "--N", "40000", "--out", path("z.csv")}), 0);
  const CsvTable z = read_csv(path("z.csv"));
  EXPECT_EQ(z.header.size(), 10u);
  EXPECT_EQ(z.header.back(), "y");
  EXPECT_EQ(z.values.rows(), 40000);
}

TEST_F(Cli, PredictIsIndependentOfWorkerCount) {
  ASSERT_EQ(run({"gen", "--bench", "zhou", "--p", "2", "--N", "800", "--test-size", "60", "--out",
                 path("d.csv"), "--test", path("t.csv")}),
            0);
  for (const char* w : {"1", "3"}) {
    ASSERT_EQ(run({"predict", "--design", path("d.csv"), "--test", path("t.csv"), "--n", "20",
                   "--workers", w, "--out", path(std::string("p") + w + ".csv")}),
              0);
  }
  EXPECT_EQ(slurp(path("p1.csv")), slurp(path("p3.csv")));
  const CsvTable p = read_csv(path("p1.csv"));
  const std::vector<std::string> want{"x1", "x2", "mean", "s2", "df", "lower95", "upper95"};
  EXPECT_EQ(p.header, want);
  EXPECT_EQ(p.values.rows(), 60);
}

TEST_F(Cli, PredictSummaryCarriesTheResolvedConfig) {
  ASSERT_EQ(run({"gen", "--bench", "zhou", "--p", "2", "--N", "500", "--test-size", "20", "--out",
                 path("d.csv"), "--test", path("t.csv")}),
            0);
  RunConfig c = parse({"predict", "--design", path("d.csv"), "--test", path("t.csv"), "--n", "15",
                       "--out", path("p.csv"), "--prescale=200"});
  std::ostringstream log;
  cmd_predict(c, log);
  const std::string s = log.str();
  for (const char* key : {"method=alc-ray", "n0=6", "n=15", "nprime=1000", "stages=1",
                          "theta=mle", "eta=", "prescale=200", "seed=", "workers=", "seconds=",
                          "rmse=", "coverage95=", "resolved_rays=2", "scale="}) {
    EXPECT_NE(s.find(key), std::string::npos) << key << " missing from: " << s;
  }
}

TEST_F(Cli, Surface) {
  ASSERT_EQ(run({"gen", "--bench", "f2d", "--grid", "41", "--out", path("g.csv")}), 0);
  ASSERT_EQ(run({"surface", "--design", path("g.csv"), "--x", "-0.5,0.3", "--theta", "0.5", "--eta",
                 "1e-10", "--n0", "6", "--step", "6", "--out", path("s.csv")}),
            0);
  const CsvTable s = read_csv(path("s.csv"));
  EXPECT_EQ(s.values.rows(), 41 * 41 - 6);
  EXPECT_GE(s.values.col(2).minCoeff(), -1e-10);

  const Design g = read_design(path("g.csv"));
  const NeighborIndex index(g.X);
  const std::vector<double> x{-0.5, 0.3};
  const auto nn = index.nearest(x, 6);
  std::ifstream trace(path("s.csv") + ".trace.csv");
  std::string line;
  std::getline(trace, line);
  EXPECT_EQ(line, "step,row,x1,x2,origin");
  for (Index k = 0; k < 6; ++k) {
    ASSERT_TRUE(std::getline(trace, line));
    const auto comma = line.find(',');
    const auto next = line.find(',', comma + 1);
    EXPECT_EQ(std::stol(line.substr(comma + 1, next - comma - 1)), nn[static_cast<std::size_t>(k)] + 1);
  }
  EXPECT_FALSE(std::getline(trace, line));

  EXPECT_EQ(run({"gen", "--bench", "zhou", "--p", "3", "--N", "50", "--out", path("z3.csv")}), 0);
  EXPECT_EQ(run({"surface", "--design", path("z3.csv"), "--x", "0.5,0.5", "--out", path("s3.csv")}), 1);
}
