#pragma once

#include "localgp/types.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace localgp::bench {

using Range = std::pair<double, double>;

// 2-d synthetic response -w(x1) w(x2).
double f2d_w(double x);
double f2d(double x1, double x2);

// Physical inputs in the order r_w, r, T_u, H_u, T_l, H_l, L, K_w.
double borehole(Point x);
const std::vector<Range>& borehole_ranges();

// Inputs in the unit cube of dimension p.
double zhou(Point x);
// Natural log of zhou, evaluated through log-sum-exp so that it stays finite
// where zhou underflows.
double zhou_log(Point x);

// Physical inputs in the order M, S, V_0, k, P_0, T_a, T_0.
double piston(Point x);
const std::vector<Range>& piston_ranges();

// Affine map from [0,1]^p onto the given box.
std::vector<double> from_unit(Point u, const std::vector<Range>& ranges);

struct BenchFn {
  std::string name;
  Index dim = 0;
  std::vector<Range> ranges;              // physical box the evaluator expects
  std::function<double(Point)> evaluate;  // takes physical inputs
  bool log_response = false;
  bool coded = false;  // designs live in [0,1]^p and are mapped onto `ranges`

  // Box that designs are drawn from: the unit cube when coded.
  std::vector<Range> design_box() const;

  // Response at a design-space point.
  double at(Point x) const;

  // Evaluates every row of a design-space matrix.
  Vector evaluate_rows(const RowMatrix& X) const;
};

// Known names: f2d, borehole and piston (coded inputs), zhou (dimension p,
// log response for p >= 2).
BenchFn lookup(const std::string& name, Index p = 0);
std::vector<std::string> names();

// Latin hypercube sample of N points in the box: one point per stratum in
// every column, uniformly jittered within the stratum.
RowMatrix lhs(Index N, Index p, const std::vector<Range>& ranges, std::uint64_t seed);

// m x m regular grid on [lo, hi]^2; the first coordinate varies slowest.
RowMatrix grid2d(Index m, double lo, double hi);

// The 99 x 99 predictive grid at the midpoints of every other cell of the
// 201 x 201 training grid on [-2, 2]^2.
RowMatrix offset_test_grid();

// Design with responses from fn at the rows of X.
Design make_design(const BenchFn& fn, RowMatrix X);

}  // namespace localgp::bench
