#include "localgp/local_design.hpp"

#include "localgp/alc.hpp"
#include "localgp/bench.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace localgp;
using namespace testing_support;

namespace {

struct Fixture {
  Design design;
  NeighborIndex index;
  SearchContext ctx;

  explicit Fixture(Design d)
      : design(std::move(d)), index(design.X), ctx(design, index) {}
};

Design random_design(unsigned seed, std::size_t N, std::size_t p) {
  oracle::Gen g(seed);
  const auto X = g.points(N, p);
  return {to_matrix(X), to_vector(responses(X))};
}

SearchSpec spec_for(SearchMethod m, Index n, Index n0 = 6) {
  SearchSpec s;
  s.method = m;
  s.n = n;
  s.n0 = n0;
  s.eta = 1e-6;
  return s;
}

void check_trace(const LocalDesignTrace& t, const Fixture& f, Point x, Index n0, Index n) {
  ASSERT_EQ(static_cast<Index>(t.order.size()), n);
  ASSERT_EQ(t.origin.size(), t.order.size());
  const std::set<Index> unique(t.order.begin(), t.order.end());
  EXPECT_EQ(unique.size(), t.order.size());
  for (Index r : t.order) {
    EXPECT_GE(r, 0);
    EXPECT_LT(r, f.design.size());
  }
  const auto nn = f.index.nearest(x, n0);
  EXPECT_TRUE(std::equal(nn.begin(), nn.end(), t.order.begin()));
}

}  // namespace

TEST(RoundRobin, StartRanks) {
  // t = j - n0 + 1; k = t mod floor(sqrt t).
  const Index expected[30] = {0, 0, 0, 0, 1, 0, 1, 0, 0, 1, 2, 0, 1, 2, 0,
                              0, 1, 2, 3, 0, 1, 2, 3, 0, 0, 1, 2, 3, 4, 0};
  for (Index t = 1; t <= 30; ++t) {
    const auto r = ray_start_indices(t + 5, 6, 3);
    ASSERT_EQ(r.size(), 3u);
    EXPECT_EQ(r[0], expected[t - 1]) << "t=" << t;
    EXPECT_EQ(r[2], expected[t - 1] + 2);
  }
}

TEST(Ray, TenfoldRuleAndClipping) {
  const std::vector<double> lo{-2.0, -2.0}, hi{2.0, 2.0};
  const oracle::Vec x{0.0, 0.0};
  auto end_of = [&](oracle::Vec s) {
    const RaySegment r = make_ray(pt(x), pt(s), lo, hi);
    return std::pair{r.end[0], r.end[1]};
  };
  auto [a1, a2] = end_of({0.1, 0.0});
  EXPECT_NEAR(a1, 1.0, 1e-15);
  EXPECT_NEAR(a2, 0.0, 1e-15);
  auto [b1, b2] = end_of({0.5, 0.0});
  EXPECT_NEAR(b1, 2.0, 1e-15);
  EXPECT_NEAR(b2, 0.0, 1e-15);
  auto [c1, c2] = end_of({0.3, 0.4});
  EXPECT_NEAR(c1, 1.5, 1e-14);
  EXPECT_NEAR(c2, 2.0, 1e-14);
}

TEST(Ray, DegenerateAtTheBoxFace) {
  const std::vector<double> lo{0.0, 0.0}, hi{1.0, 1.0};
  const oracle::Vec x{0.5, 0.5}, s{1.0, 0.5};
  EXPECT_TRUE(make_ray(pt(x), pt(s), lo, hi).degenerate);
  EXPECT_THROW(make_ray(pt(x), pt(x), lo, hi), std::invalid_argument);
  const RaySegment r = make_ray(pt(oracle::Vec{0.5, 0.5}), pt(oracle::Vec{0.6, 0.5}), lo, hi);
  EXPECT_NEAR(r.at(0.0)[0], 0.6, 1e-15);
  EXPECT_NEAR(r.at(1.0)[0], 1.0, 1e-15);
}

TEST(LocalDesign, NearestNeighborDesign) {
  const Fixture f(random_design(51, 1500, 2));
  const oracle::Vec x{0.4, 0.6};
  SearchSpec s = spec_for(SearchMethod::NearestNeighbor, 30);
  s.fixed_theta = 0.1;
  const LocalDesign d = build_nn(pt(x), f.ctx, s);
  check_trace(d.trace, f, pt(x), 30, 30);
}

TEST(LocalDesign, ExhaustiveTakesTheArgmaxEachStep) {
  const Fixture f(random_design(52, 400, 2));
  const oracle::Vec x{0.3, 0.7};
  SearchSpec s = spec_for(SearchMethod::AlcExhaustive, 16);
  s.n_prime = 120;
  const double theta = 0.05;
  const LocalDesign d = build_alc_ex(pt(x), f.ctx, s, theta);
  check_trace(d.trace, f, pt(x), 6, 16);

  const auto pool = f.index.nearest(pt(x), 120);
  const oracle::Mat all = to_rows(f.design.X);
  for (std::size_t j = 6; j < 16; ++j) {
    oracle::Mat Xj;
    for (std::size_t k = 0; k < j; ++k) Xj.push_back(all[static_cast<std::size_t>(d.trace.order[k])]);
    double best = -1.0;
    for (Index r : pool) {
      if (std::find(d.trace.order.begin(), d.trace.order.begin() + static_cast<long>(j), r) !=
          d.trace.order.begin() + static_cast<long>(j)) {
        continue;
      }
      best = std::max(best, oracle::alc(Xj, all[static_cast<std::size_t>(r)], x, theta, 1e-6));
    }
    const double chosen =
        oracle::alc(Xj, all[static_cast<std::size_t>(d.trace.order[j])], x, theta, 1e-6);
    EXPECT_GE(chosen, best * (1.0 - 1e-7)) << "step " << j;
    EXPECT_EQ(d.trace.origin[j], StepOrigin::Exhaustive);
  }
}

TEST(LocalDesign, RayTraceIsValidAndDeterministic) {
  const Fixture f(random_design(53, 3000, 3));
  const oracle::Vec x{0.5, 0.2, 0.8};
  const SearchSpec s = spec_for(SearchMethod::AlcRay, 40);
  const LocalDesign a = build_alc_ray(pt(x), f.ctx, s, 0.1);
  const LocalDesign b = build_alc_ray(pt(x), f.ctx, s, 0.1);
  check_trace(a.trace, f, pt(x), 6, 40);
  EXPECT_EQ(a.trace.order, b.trace.order);
  EXPECT_EQ(a.trace.rays_searched, 34 * 3);
  EXPECT_GT(a.trace.rays_interior, 0);
  for (std::size_t j = 6; j < 40; ++j) EXPECT_NE(a.trace.origin[j], StepOrigin::InitNN);
}

TEST(LocalDesign, ReferenceLocationInsideTheDesign) {
  const Fixture f(random_design(54, 500, 2));
  const Point x = f.design.row(17);
  SearchSpec s = spec_for(SearchMethod::AlcRay, 12, 1);
  s.num_rays = 1;
  const LocalDesign d = build_alc_ray(x, f.ctx, s, 0.05);
  EXPECT_EQ(d.trace.order.front(), 17);
  check_trace(d.trace, f, x, 1, 12);
}

TEST(LocalDesign, FirstStepsAreNearestNeighborsForEveryMethod) {
  const Fixture f(random_design(55, 2000, 2));
  const oracle::Vec x{0.61, 0.33};
  for (SearchMethod m : {SearchMethod::NearestNeighbor, SearchMethod::AlcExhaustive,
                         SearchMethod::AlcRay}) {
    SearchSpec s = spec_for(m, 25, 8);
    s.fixed_theta = 0.05;
    const LocalResult r = local_predict(pt(x), f.ctx, s);
    check_trace(r.trace, f, pt(x), 8, 25);
    EXPECT_EQ(r.trace.theta_final, 0.05);
  }
}

TEST(LocalDesign, LocalPredictWithFixedThetaUsesTheDesignState) {
  const Fixture f(random_design(56, 800, 2));
  const oracle::Vec x{0.2, 0.2};
  SearchSpec s = spec_for(SearchMethod::NearestNeighbor, 20);
  s.fixed_theta = 0.08;
  const LocalResult r = local_predict(pt(x), f.ctx, s);
  oracle::Mat Xn;
  oracle::Vec Yn;
  const oracle::Mat all = to_rows(f.design.X);
  for (Index row : r.trace.order) {
    Xn.push_back(all[static_cast<std::size_t>(row)]);
    Yn.push_back(f.design.Y[row]);
  }
  const auto ref = oracle::gp(Xn, Yn, x, 0.08, 1e-6);
  EXPECT_NEAR(r.prediction.mean, ref.mean, 1e-8);
  EXPECT_NEAR(r.prediction.scale, ref.scale, 1e-10);
}

TEST(LocalDesign, TwoStageRecordsBothLengthscales) {
  const Fixture f(random_design(57, 2000, 2));
  const oracle::Vec x{0.45, 0.55};
  SearchSpec s = spec_for(SearchMethod::AlcRay, 30);
  s.stages = 2;
  const LocalResult r = local_predict(pt(x), f.ctx, s);
  ASSERT_GE(r.trace.theta_used.size(), 1u);
  if (r.trace.theta_used.size() == 2) {
    EXPECT_NE(r.trace.theta_used[0], r.trace.theta_used[1]);
  }
  EXPECT_GT(r.trace.theta_final, 0.0);
  EXPECT_TRUE(std::isfinite(r.prediction.mean));
}

TEST(LocalDesign, SpecValidation) {
  SearchSpec s;
  s.n0 = 10;
  s.n = 5;
  EXPECT_THROW(s.validate(100), std::invalid_argument);
  s = SearchSpec{};
  s.n = 200;
  EXPECT_THROW(s.validate(100), std::invalid_argument);
  s = SearchSpec{};
  s.method = SearchMethod::AlcExhaustive;
  s.n_prime = 10;
  EXPECT_THROW(s.validate(100), std::invalid_argument);
  s = SearchSpec{};
  s.stages = 3;
  EXPECT_THROW(s.validate(100), std::invalid_argument);
  s = SearchSpec{};
  s.n = s.n0;
  EXPECT_NO_THROW(s.validate(100));
  EXPECT_EQ(parse_method("alc-ex"), SearchMethod::AlcExhaustive);
  EXPECT_THROW(parse_method("alc"), std::invalid_argument);
}

// Greedy designs beat nearest neighbors out of sample, and rays stay close to
// the exhaustive search.
TEST(LocalDesign, ExhaustiveDominanceAndRayCompetitiveness) {
  const bench::BenchFn fn = bench::lookup("f2d");
  double rmse_nn = 0.0, rmse_ex = 0.0, rmse_ray = 0.0;
  constexpr int kProblems = 30;
  constexpr int kTest = 20;
  for (int prob = 0; prob < kProblems; ++prob) {
    const Design d = bench::make_design(fn, bench::lhs(2000, 2, fn.ranges, 1000 + prob));
    const RowMatrix T = bench::lhs(kTest, 2, {{-1.8, 1.8}, {-1.8, 1.8}}, 5000 + prob);
    const Fixture f(d);
    double s_nn = 0.0, s_ex = 0.0, s_ray = 0.0;
    for (Index i = 0; i < kTest; ++i) {
      const double y = fn.at(row_of(T, i));
      auto err = [&](SearchMethod m) {
        SearchSpec s = spec_for(m, 30);
        const double mu = local_predict(row_of(T, i), f.ctx, s).prediction.mean;
        return (mu - y) * (mu - y);
      };
      s_nn += err(SearchMethod::NearestNeighbor);
      s_ex += err(SearchMethod::AlcExhaustive);
      s_ray += err(SearchMethod::AlcRay);
    }
    rmse_nn += std::sqrt(s_nn / kTest) / kProblems;
    rmse_ex += std::sqrt(s_ex / kTest) / kProblems;
    rmse_ray += std::sqrt(s_ray / kTest) / kProblems;
  }
  RecordProperty("rmse_nn", std::to_string(rmse_nn));
  RecordProperty("rmse_ex", std::to_string(rmse_ex));
  RecordProperty("rmse_ray", std::to_string(rmse_ray));
  EXPECT_LE(rmse_ex, rmse_nn);
  EXPECT_LE(rmse_ray, 1.5 * rmse_ex);
}
