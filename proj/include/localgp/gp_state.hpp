#pragma once

#include "localgp/kernel.hpp"
#include "localgp/types.hpp"

#include <optional>

namespace localgp {

// Raised when K cannot be factorized even after nugget escalation.
class FactorizationError : public NumericalError {
 public:
  FactorizationError(const std::string& what, double min_pivot, double rcond)
      : NumericalError(what), min_pivot_(min_pivot), rcond_(rcond) {}
  double min_pivot() const { return min_pivot_; }
  double rcond() const { return rcond_; }

 private:
  double min_pivot_;
  double rcond_;
};

// Raised when adding a point whose remaining variance v_j is at or below the
// degeneracy tolerance.
class DegenerateExtension : public NumericalError {
 public:
  DegenerateExtension(const std::string& what, double v) : NumericalError(what), v_(v) {}
  double v() const { return v_; }

 private:
  double v_;
};

// Below this remaining variance a partitioned update carries no precision.
inline double degeneracy_tolerance(double eta) { return 1e-10 * (1.0 + eta); }

// Nugget used when the first factorization attempt fails.
inline constexpr double kEscalatedNugget = 1e-8;

struct Prediction {
  double mean = 0.0;
  double scale = 0.0;  // sigma^2 of the Student-t
  double df = 0.0;
  std::optional<double> variance;  // scale * df / (df - 2), only when df > 2
  double lower95 = 0.0;
  double upper95 = 0.0;

  double sd() const;
};

// Exact GP on a small design. Keeps an explicit inverse of K so that the
// variance-reduction criterion and the j -> j+1 update can use it directly.
class GpState {
 public:
  // Factorizes K for (X, params). On failure retries once with the nugget
  // raised to kEscalatedNugget; `nugget_escalated()` reports that. An
  // interpolating model (eta == 0) over duplicated rows is rejected outright.
  static GpState build(RowMatrix X, Vector Y, const KernelParams& params);

  Index size() const { return X_.rows(); }
  Index dim() const { return X_.cols(); }
  const RowMatrix& X() const { return X_; }
  const Vector& Y() const { return Y_; }
  const Matrix& Kinv() const { return Kinv_; }
  // Lower Cholesky factor L of K, extended alongside Kinv.
  const Matrix& chol() const { return L_; }
  double logdetK() const { return logdet_; }
  double psi() const { return psi_; }
  const KernelParams& params() const { return params_; }
  bool nugget_escalated() const { return escalated_; }

  // K(x, x) for a predictive location: 1 + eta.
  double prior_variance() const { return 1.0 + params_.eta; }

  Vector cross_corr(Point x) const { return cross_correlation(params_, X_, x); }

  // L^{-1} k. Quadratic forms k^T K^{-1} k are taken as squared norms of this.
  Vector whiten(const Vector& k) const;
  // L^{-1} B for a j x m block.
  Matrix whiten(const Matrix& B) const;

  // The predictive bracket K(x,x) - k(x)^T K^{-1} k(x), clamped at zero.
  double bracket(Point x) const;

  double log_marg_lik() const;
  Prediction predict(Point x) const;

  // Partitioned-inverse update in O(j^2). Throws DegenerateExtension when
  // v_j(x_new) <= degeneracy_tolerance(eta).
  void extend(Point x_new, double y_new);

 private:
  GpState() = default;

  RowMatrix X_;
  Vector Y_;
  Matrix Kinv_;
  Matrix L_;
  Vector w_;  // L^{-1} Y
  double logdet_ = 0.0;
  double psi_ = 0.0;
  KernelParams params_;
  bool escalated_ = false;
};

GpState build_state(RowMatrix X, Vector Y, const KernelParams& params);
double log_marg_lik(const GpState& state);
Prediction predict(const GpState& state, Point x);
GpState extend_state(const GpState& state, Point x_new, double y_new);

// Two-sided 95% Student-t quantile t_{0.975}(df).
double student_t_975(double df);

}  // namespace localgp
