#pragma once

#include <Eigen/Dense>

#include <span>
#include <stdexcept>
#include <string>

namespace localgp {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
// Designs are stored one point per row so that a row is a contiguous span.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = std::span<const double>;

inline Point row_of(const RowMatrix& X, Index i) {
  return {X.row(i).data(), static_cast<std::size_t>(X.cols())};
}

inline Point as_point(const Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// The immutable training set D_N: inputs one per row, responses aligned.
struct Design {
  RowMatrix X;
  Vector Y;

  Index size() const { return X.rows(); }
  Index dim() const { return X.cols(); }
  Point row(Index i) const { return row_of(X, i); }
};

// Failures of the numerical machinery (factorizations, degenerate updates,
// likelihood maximization). The CLI maps these to exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data. The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace localgp
