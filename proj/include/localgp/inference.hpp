#pragma once

#include "localgp/kernel.hpp"
#include "localgp/types.hpp"

#include <cstdint>
#include <vector>

namespace localgp {

// Search box for a lengthscale: 0 < lo <= init <= hi.
struct ThetaBounds {
  double lo = 0.0;
  double hi = 0.0;
  double init = 0.0;

  void validate() const;
};

// Likelihood maximization hit a non-finite value. `last_valid_theta()` is the
// last lengthscale at which the likelihood was finite.
class EstimationError : public NumericalError {
 public:
  EstimationError(const std::string& what, double last_valid_theta)
      : NumericalError(what), last_valid_theta_(last_valid_theta) {}
  double last_valid_theta() const { return last_valid_theta_; }

 private:
  double last_valid_theta_;
};

// Log marginal likelihood (reference prior on the scale) and its derivative
// in one lengthscale coordinate.
struct LikelihoodValue {
  double loglik = 0.0;
  double dtheta = 0.0;
};

// Evaluates the log likelihood at `params` and, when `coordinate` >= 0, its
// derivative in params.theta[coordinate]. Throws FactorizationError when K is
// not numerically positive definite; no nugget escalation happens here.
LikelihoodValue log_lik_and_grad(const RowMatrix& X, const Vector& Y,
                                 const KernelParams& params, int coordinate);

double log_lik(const RowMatrix& X, const Vector& Y, const KernelParams& params);

// d/dtheta of the log likelihood for the isotropic lengthscale:
// -1/2 tr(K^-1 dK) + (j/2) Y'K^-1 dK K^-1 Y / psi.
double dlog_marg_lik_dtheta(const RowMatrix& X, const Vector& Y, const KernelParams& params);

struct MleResult {
  double theta = 0.0;
  double loglik = 0.0;
  int iterations = 0;
};

// Isotropic lengthscale MLE. Works in log(theta): brackets a sign change of
// the derivative, then runs a secant-Newton/bisection hybrid. When the
// curvature estimate is not negative it hands the bracket to Brent's
// derivative-free search. Deterministic; never returns a point worse than init.
MleResult mle_theta(const RowMatrix& X, const Vector& Y, double eta, const ThetaBounds& bounds);

// Separable lengthscales by cyclic coordinate ascent, each coordinate solved
// with the same 1-d scheme. Stops when a sweep gains less than 1e-6 in log
// likelihood or after 10 sweeps.
std::vector<double> mle_theta_sep(const RowMatrix& X, const Vector& Y, double eta,
                                  std::span<const ThetaBounds> bounds);

// Deterministic starting box: init is the 0.1-quantile (inverse empirical CDF)
// of nonzero pairwise squared distances over at most 1000 rows, lo = init/100,
// hi = the largest pairwise squared distance. Rows beyond 1000 are subsampled
// with a fixed-seed generator.
ThetaBounds default_theta0(const RowMatrix& X);

// Per-coordinate boxes for a global separable fit: default_theta0 with hi
// raised 100-fold, so near-linear or inert inputs are not capped.
std::vector<ThetaBounds> default_theta0_sep(const RowMatrix& X);

}  // namespace localgp
