#include "localgp/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace localgp {

KernelParams KernelParams::isotropic(double theta, double eta) {
  KernelParams params;
  params.theta = {theta};
  params.eta = eta;
  return params;
}

KernelParams KernelParams::separable(std::vector<double> theta, double eta) {
  KernelParams params;
  params.theta = std::move(theta);
  params.eta = eta;
  return params;
}

void KernelParams::validate(Index p) const {
  if (theta.empty()) {
    throw std::invalid_argument("kernel: empty lengthscale vector");
  }
  if (!is_isotropic() && static_cast<Index>(theta.size()) != p) {
    throw std::invalid_argument("kernel: separable lengthscale has " +
                                std::to_string(theta.size()) + " entries, inputs have " +
                                std::to_string(p));
  }
  for (double t : theta) {
    if (!(t > 0.0) || !std::isfinite(t)) {
      throw std::invalid_argument("kernel: lengthscale must be positive and finite");
    }
  }
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw std::invalid_argument("kernel: nugget must be nonnegative");
  }
}

double sq_dist(Point x, Point x2) {
  if (x.size() != x2.size()) {
    throw std::invalid_argument("sq_dist: dimension mismatch (" + std::to_string(x.size()) +
                                " vs " + std::to_string(x2.size()) + ")");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double diff = x[k] - x2[k];
    d += diff * diff;
  }
  return d;
}

double iso_corr(Point x, Point x2, double theta, double eta, bool same_index) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("iso_corr: nonpositive lengthscale");
  }
  const double c = std::exp(-sq_dist(x, x2) / theta);
  return same_index ? c + eta : c;
}

double sep_corr(Point x, Point x2, std::span<const double> theta, double eta,
                bool same_index) {
  if (x.size() != x2.size() || theta.size() != x.size()) {
    throw std::invalid_argument("sep_corr: dimension mismatch");
  }
  double e = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(theta[k] > 0.0)) {
      throw std::invalid_argument("sep_corr: nonpositive lengthscale in coordinate " +
                                  std::to_string(k));
    }
    const double diff = x[k] - x2[k];
    e += diff * diff / theta[k];
  }
  const double c = std::exp(-e);
  return same_index ? c + eta : c;
}

double correlation(const KernelParams& params, Point x, Point x2, bool same_index) {
  switch (params.family) {
    case CorrelationFamily::Gaussian:
      if (params.is_isotropic()) {
        return iso_corr(x, x2, params.theta.front(), params.eta, same_index);
      }
      return sep_corr(x, x2, params.theta, params.eta, same_index);
  }
  throw std::logic_error("correlation: unknown family");
}

Matrix correlation_matrix(const KernelParams& params, const RowMatrix& X) {
  const Index j = X.rows();
  Matrix K(j, j);
  for (Index a = 0; a < j; ++a) {
    K(a, a) = correlation(params, row_of(X, a), row_of(X, a), true);
    for (Index b = 0; b < a; ++b) {
      const double c = correlation(params, row_of(X, a), row_of(X, b), false);
      K(a, b) = c;
      K(b, a) = c;
    }
  }
  return K;
}

Vector cross_correlation(const KernelParams& params, const RowMatrix& X, Point x) {
  Vector k(X.rows());
  for (Index i = 0; i < X.rows(); ++i) {
    k[i] = correlation(params, row_of(X, i), x, false);
  }
  return k;
}

Matrix cross_correlation(const KernelParams& params, const RowMatrix& A,
                         const RowMatrix& B) {
  Matrix K(A.rows(), B.rows());
  for (Index j = 0; j < B.rows(); ++j) {
    for (Index i = 0; i < A.rows(); ++i) {
      K(i, j) = correlation(params, row_of(A, i), row_of(B, j), false);
    }
  }
  return K;
}

}  // namespace localgp
