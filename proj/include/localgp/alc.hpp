#pragma once

#include "localgp/gp_state.hpp"
#include "localgp/types.hpp"

#include <limits>

namespace localgp {

// Ordering sentinel for candidates that would make the update degenerate.
inline constexpr double kInadmissible = -std::numeric_limits<double>::infinity();

// Auxiliary quantities for one candidate x' against the current design:
// kxprime = k_j(x'), v = K_eta(x',x') - k_j(x')^T K^{-1} k_j(x'),
// g = K^{-1} k_j(x') / v, and kx = k_j(x) for the reference location.
struct AlcScratch {
  Vector kxprime;
  Vector g;
  double v = 0.0;
  Vector kx;
};

AlcScratch alc_terms(const GpState& state, Point x_cand, Point x_ref);

// Reduction in the predictive bracket at x_ref from adding x_cand to the
// design: (k_j(x)^T K^{-1} k_j(x') - K(x', x))^2 / v_j(x'). Returns
// kInadmissible when v_j(x') is at or below the degeneracy tolerance.
double alc_reduction(const GpState& state, Point x_cand, Point x_ref);

// Per-reference-location evaluator: caches L^{-1} k_j(x_ref) so that each
// candidate costs one O(j^2) triangular solve.
class AlcEvaluator {
 public:
  AlcEvaluator(const GpState& state, Point x_ref);

  double operator()(Point x_cand) const;

  // Batch form over candidates whose cross-correlations against the current
  // design are already known: `kc` is m x j (row i = k_j(candidate i)) and
  // `kref` holds K(candidate i, x_ref).
  Vector batch(const Eigen::Ref<const Matrix>& kc, const Vector& kref) const;

 private:
  const GpState& state_;
  Point x_ref_;
  Vector lx_;
  double tol_;
};

// Elementwise alc_reduction over the rows of `candidates`.
Vector alc_batch(const GpState& state, const RowMatrix& candidates, Point x_ref);

}  // namespace localgp
