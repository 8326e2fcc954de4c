#include "localgp/alc.hpp"

namespace localgp {

AlcScratch alc_terms(const GpState& state, Point x_cand, Point x_ref) {
  AlcScratch s;
  s.kxprime = state.cross_corr(x_cand);
  const Vector l = state.whiten(s.kxprime);
  s.v = state.prior_variance() - l.squaredNorm();
  s.g = state.chol().triangularView<Eigen::Lower>().transpose().solve(l) / s.v;
  s.kx = state.cross_corr(x_ref);
  return s;
}

AlcEvaluator::AlcEvaluator(const GpState& state, Point x_ref)
    : state_(state),
      x_ref_(x_ref),
      lx_(state.whiten(state.cross_corr(x_ref))),
      tol_(degeneracy_tolerance(state.params().eta)) {}

double AlcEvaluator::operator()(Point x_cand) const {
  const Vector l = state_.whiten(state_.cross_corr(x_cand));
  const double v = state_.prior_variance() - l.squaredNorm();
  if (!(v > tol_)) return kInadmissible;
  const double diff = lx_.dot(l) - correlation(state_.params(), x_cand, x_ref_, false);
  return diff * diff / v;
}

Vector AlcEvaluator::batch(const Eigen::Ref<const Matrix>& kc, const Vector& kref) const {
  const Matrix B = state_.whiten(Matrix(kc.transpose()));
  Vector out(kc.rows());
  const Vector cross = B.transpose() * lx_;
  for (Index i = 0; i < kc.rows(); ++i) {
    const double v = state_.prior_variance() - B.col(i).squaredNorm();
    if (!(v > tol_)) {
      out[i] = kInadmissible;
      continue;
    }
    const double diff = cross[i] - kref[i];
    out[i] = diff * diff / v;
  }
  return out;
}

double alc_reduction(const GpState& state, Point x_cand, Point x_ref) {
  return AlcEvaluator(state, x_ref)(x_cand);
}

Vector alc_batch(const GpState& state, const RowMatrix& candidates, Point x_ref) {
  const Matrix kc = cross_correlation(state.params(), candidates, state.X());
  Vector kref(candidates.rows());
  for (Index i = 0; i < candidates.rows(); ++i) {
    kref[i] = correlation(state.params(), row_of(candidates, i), x_ref, false);
  }
  return AlcEvaluator(state, x_ref).batch(kc, kref);
}

}  // namespace localgp
