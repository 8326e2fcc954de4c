#include "localgp/bench.hpp"

#include "localgp/rng.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace localgp::bench {

namespace {

void warn_out_of_range(const char* name, Point x, const std::vector<Range>& ranges) {
  for (std::size_t i = 0; i < ranges.size(); ++i) {
    if (x[i] < ranges[i].first || x[i] > ranges[i].second) {
      std::cerr << "warning: " << name << " input " << i + 1 << " = " << x[i]
                << " outside [" << ranges[i].first << ", " << ranges[i].second << "]\n";
      return;
    }
  }
}

void check_dim(const char* name, Point x, std::size_t p) {
  if (x.size() != p) {
    throw std::invalid_argument(std::string(name) + ": expected " + std::to_string(p) +
                                " inputs, got " + std::to_string(x.size()));
  }
}

}  // namespace

double f2d_w(double x) {
  return std::exp(-(x - 1.0) * (x - 1.0)) + std::exp(-0.8 * (x + 1.0) * (x + 1.0)) -
         0.05 * std::sin(8.0 * (x + 0.1));
}

double f2d(double x1, double x2) { return -f2d_w(x1) * f2d_w(x2); }

const std::vector<Range>& borehole_ranges() {
  static const std::vector<Range> ranges{{0.05, 0.15},     {100.0, 50000.0}, {63070.0, 115600.0},
                                         {990.0, 1110.0},  {63.1, 116.0},    {700.0, 820.0},
                                         {1120.0, 1680.0}, {9855.0, 12045.0}};
  return ranges;
}

double borehole(Point x) {
  check_dim("borehole", x, 8);
  warn_out_of_range("borehole", x, borehole_ranges());
  const double rw = x[0], r = x[1], Tu = x[2], Hu = x[3];
  const double Tl = x[4], Hl = x[5], L = x[6], Kw = x[7];
  const double lr = std::log(r / rw);
  return 2.0 * std::numbers::pi * Tu * (Hu - Hl) /
         (lr * (1.0 + 2.0 * L * Tu / (lr * rw * rw * Kw) + Tu / Tl));
}

double zhou_log(Point x) {
  if (x.empty()) throw std::invalid_argument("zhou: empty input");
  const double p = static_cast<double>(x.size());
  double s1 = 0.0;
  double s2 = 0.0;
  for (double xi : x) {
    const double a = 10.0 * (xi - 1.0 / 3.0);
    const double b = 10.0 * (xi - 2.0 / 3.0);
    s1 += a * a;
    s2 += b * b;
  }
  const double e1 = -0.5 * s1;
  const double e2 = -0.5 * s2;
  const double hi = std::max(e1, e2);
  const double lse = hi + std::log(std::exp(e1 - hi) + std::exp(e2 - hi));
  return p * std::log(10.0) - std::log(2.0) - 0.5 * p * std::log(2.0 * std::numbers::pi) + lse;
}

double zhou(Point x) { return std::exp(zhou_log(x)); }

const std::vector<Range>& piston_ranges() {
  static const std::vector<Range> ranges{{30.0, 60.0},      {0.005, 0.020},   {0.002, 0.010},
                                         {1000.0, 5000.0},  {90000.0, 110000.0},
                                         {290.0, 296.0},    {340.0, 360.0}};
  return ranges;
}

double piston(Point x) {
  check_dim("piston", x, 7);
  warn_out_of_range("piston", x, piston_ranges());
  const double M = x[0], S = x[1], V0 = x[2], k = x[3];
  const double P0 = x[4], Ta = x[5], T0 = x[6];
  const double A = P0 * S + 19.62 * M - k * V0 / S;
  const double disc = A * A + 4.0 * k * (P0 * V0 / T0) * Ta;
  if (!(disc > 0.0)) throw std::domain_error("piston: nonpositive discriminant");
  const double V = S / (2.0 * k) * (std::sqrt(disc) - A);
  const double denom = k + S * S * P0 * V0 * Ta / (T0 * V * V);
  return 2.0 * std::numbers::pi * std::sqrt(M / denom);
}

std::vector<double> from_unit(Point u, const std::vector<Range>& ranges) {
  check_dim("from_unit", u, ranges.size());
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    out[i] = ranges[i].first + u[i] * (ranges[i].second - ranges[i].first);
  }
  return out;
}

std::vector<Range> BenchFn::design_box() const {
  if (coded) return std::vector<Range>(static_cast<std::size_t>(dim), Range{0.0, 1.0});
  return ranges;
}

double BenchFn::at(Point x) const {
  if (!coded) return evaluate(x);
  const std::vector<double> phys = from_unit(x, ranges);
  return evaluate(phys);
}

Vector BenchFn::evaluate_rows(const RowMatrix& X) const {
  if (X.cols() != dim) throw std::invalid_argument(name + ": design has the wrong dimension");
  Vector y(X.rows());
  for (Index i = 0; i < X.rows(); ++i) y[i] = at(row_of(X, i));
  return y;
}

BenchFn lookup(const std::string& name, Index p) {
  BenchFn fn;
  fn.name = name;
  if (name == "f2d") {
    fn.dim = 2;
    fn.ranges = {{-2.0, 2.0}, {-2.0, 2.0}};
    fn.evaluate = [](Point x) { return f2d(x[0], x[1]); };
  } else if (name == "borehole") {
    fn.dim = 8;
    fn.ranges = borehole_ranges();
    fn.evaluate = borehole;
    fn.coded = true;
  } else if (name == "piston") {
    fn.dim = 7;
    fn.ranges = piston_ranges();
    fn.evaluate = piston;
    fn.coded = true;
  } else if (name == "zhou") {
    if (p < 1) throw std::invalid_argument("zhou: dimension must be at least 1");
    fn.dim = p;
    fn.ranges.assign(static_cast<std::size_t>(p), Range{0.0, 1.0});
    fn.log_response = p >= 2;
    if (fn.log_response) {
      fn.evaluate = zhou_log;
    } else {
      fn.evaluate = zhou;
    }
  } else {
    throw std::invalid_argument("unknown benchmark '" + name + "'");
  }
  return fn;
}

std::vector<std::string> names() { return {"f2d", "borehole", "piston", "zhou"}; }

RowMatrix lhs(Index N, Index p, const std::vector<Range>& ranges, std::uint64_t seed) {
  if (N < 1 || p < 1) throw std::invalid_argument("lhs: N and p must be positive");
  if (static_cast<Index>(ranges.size()) != p) {
    throw std::invalid_argument("lhs: need one range per dimension");
  }
  Rng rng(seed);
  RowMatrix X(N, p);
  std::vector<Index> strata(static_cast<std::size_t>(N));
  for (Index c = 0; c < p; ++c) {
    std::iota(strata.begin(), strata.end(), Index{0});
    shuffle(strata, rng);
    const auto [lo, hi] = ranges[static_cast<std::size_t>(c)];
    for (Index i = 0; i < N; ++i) {
      const double u =
          (static_cast<double>(strata[static_cast<std::size_t>(i)]) + rng.uniform01()) /
          static_cast<double>(N);
      X(i, c) = lo + u * (hi - lo);
    }
  }
  return X;
}

RowMatrix grid2d(Index m, double lo, double hi) {
  if (m < 2) throw std::invalid_argument("grid2d: m must be at least 2");
  const double step = (hi - lo) / static_cast<double>(m - 1);
  RowMatrix X(m * m, 2);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      X(a * m + b, 0) = lo + static_cast<double>(a) * step;
      X(a * m + b, 1) = lo + static_cast<double>(b) * step;
    }
  }
  return X;
}

RowMatrix offset_test_grid() {
  constexpr Index m = 99;
  RowMatrix X(m * m, 2);
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      X(a * m + b, 0) = -1.97 + 0.04 * static_cast<double>(a);
      X(a * m + b, 1) = -1.97 + 0.04 * static_cast<double>(b);
    }
  }
  return X;
}

Design make_design(const BenchFn& fn, RowMatrix X) {
  Design d;
  d.Y = fn.evaluate_rows(X);
  d.X = std::move(X);
  return d;
}

}  // namespace localgp::bench
