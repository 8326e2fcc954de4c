#include "localgp/alc.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

using namespace localgp;
using namespace testing_support;

namespace {

GpState make(const oracle::Mat& X, double theta, double eta) {
  return GpState::build(to_matrix(X), to_vector(responses(X)), KernelParams::isotropic(theta, eta));
}

}  // namespace

TEST(Alc, MatchesBracketDifference) {
  oracle::Gen g(31);
  for (int t = 0; t < 60; ++t) {
    const auto j = static_cast<std::size_t>(g.integer(1, 20));
    const auto p = static_cast<std::size_t>(g.integer(1, 3));
    const auto X = g.points(j, p);
    const double theta = g.unif(0.02, 0.2);
    const double eta = g.unif(1e-6, 1e-3);
    const GpState s = make(X, theta, eta);
    const auto xc = g.points(1, p)[0];
    const auto x = g.points(1, p)[0];
    const double got = alc_reduction(s, pt(xc), pt(x));
    const double want = oracle::exact::alc(X, xc, x, theta, eta);
    EXPECT_NEAR(got, want, 1e-8 * std::max(std::abs(want), 1e-6));
    EXPECT_GE(got, 0.0);
  }
}

TEST(Alc, ScratchTermsAreConsistent) {
  oracle::Gen g(32);
  const auto X = g.points(10, 2);
  const GpState s = make(X, 0.4, 1e-6);
  const auto xc = g.points(1, 2)[0];
  const auto x = g.points(1, 2)[0];
  const AlcScratch sc = alc_terms(s, pt(xc), pt(x));
  const oracle::Vec kc = oracle::kvec(X, xc, 0.4);
  const oracle::Vec a = oracle::solve1(oracle::corr(X, 0.4, 1e-6), kc);
  const double v = 1.0 + 1e-6 - oracle::dot(kc, a);
  EXPECT_NEAR(sc.v, v, 1e-10);
  for (int i = 0; i < 10; ++i) {
    EXPECT_NEAR(sc.kxprime[i], kc[i], 1e-15);
    EXPECT_NEAR(sc.g[i], a[i] / v, 1e-7 * (1.0 + std::abs(a[i] / v)));
  }
  // Reduction from the scratch terms: v (k_x^T g - K(x', x)/v)^2.
  const double kxx = std::exp(-oracle::sqdist(xc, x) / 0.4);
  const double via = sc.v * std::pow(sc.kx.dot(sc.g) - kxx / sc.v, 2);
  EXPECT_NEAR(via, alc_reduction(s, pt(xc), pt(x)), 1e-9);
}

TEST(Alc, DesignPointIsInadmissibleWithoutNugget) {
  oracle::Gen g(33);
  const auto X = g.points(8, 2);
  const GpState s = make(X, 0.3, 0.0);
  EXPECT_EQ(alc_reduction(s, pt(X[3]), pt(X[0])), kInadmissible);
}

TEST(Alc, BatchAndEvaluatorAgree) {
  oracle::Gen g(34);
  const auto X = g.points(15, 3);
  const GpState s = make(X, 0.5, 1e-5);
  const auto C = g.points(40, 3);
  const auto x = g.points(1, 3)[0];
  const Vector b = alc_batch(s, to_matrix(C), pt(x));
  const AlcEvaluator ev(s, pt(x));
  for (int i = 0; i < 40; ++i) {
    EXPECT_NEAR(b[i], alc_reduction(s, pt(C[i]), pt(x)), 1e-12);
    EXPECT_NEAR(ev(pt(C[i])), b[i], 1e-12);
  }
}

TEST(Alc, ReferenceCandidateGivesFullReduction) {
  // Adding x itself (with no nugget) removes all predictive uncertainty at x.
  oracle::Gen g(35);
  const auto X = g.points(6, 2);
  const GpState s = make(X, 0.2, 0.0);
  const auto x = g.points(1, 2)[0];
  EXPECT_NEAR(alc_reduction(s, pt(x), pt(x)), s.bracket(pt(x)), 1e-10);
}
