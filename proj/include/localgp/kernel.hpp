#pragma once

#include "localgp/types.hpp"

#include <vector>

namespace localgp {

// Correlation families available behind `correlation()`. New families add an
// enumerator here and a case in the dispatch.
enum class CorrelationFamily { Gaussian };

// Lengthscale(s) and nugget. A single theta entry is the isotropic form; p
// entries give one lengthscale per input coordinate.
struct KernelParams {
  std::vector<double> theta{1.0};
  double eta = 0.0;
  CorrelationFamily family = CorrelationFamily::Gaussian;

  static KernelParams isotropic(double theta, double eta);
  static KernelParams separable(std::vector<double> theta, double eta);

  bool is_isotropic() const { return theta.size() == 1; }

  // Throws std::invalid_argument unless every theta > 0, eta >= 0, and the
  // separable form matches dimension p.
  void validate(Index p) const;
};

// Sum of squared coordinate differences.
double sq_dist(Point x, Point x2);

// exp(-|x - x2|^2 / theta), plus eta when the two points are the same
// training row. The nugget follows row identity, not coordinate equality.
double iso_corr(Point x, Point x2, double theta, double eta, bool same_index);

double sep_corr(Point x, Point x2, std::span<const double> theta, double eta,
                bool same_index);

double correlation(const KernelParams& params, Point x, Point x2, bool same_index);

// Correlation matrix over the rows of X, nugget on the diagonal.
Matrix correlation_matrix(const KernelParams& params, const RowMatrix& X);

// k(x): correlations between x and every row of X, without nugget.
Vector cross_correlation(const KernelParams& params, const RowMatrix& X, Point x);

// Cross-correlation block: entry (i, j) correlates row i of A with row j of B.
Matrix cross_correlation(const KernelParams& params, const RowMatrix& A,
                         const RowMatrix& B);

}  // namespace localgp
