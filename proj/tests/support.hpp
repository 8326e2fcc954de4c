#pragma once

#include "localgp/types.hpp"
#include "oracles.hpp"

#include <vector>

namespace testing_support {

inline localgp::RowMatrix to_matrix(const oracle::Mat& X) {
  localgp::RowMatrix M(static_cast<localgp::Index>(X.size()),
                       X.empty() ? 0 : static_cast<localgp::Index>(X[0].size()));
  for (localgp::Index i = 0; i < M.rows(); ++i) {
    for (localgp::Index j = 0; j < M.cols(); ++j) {
      M(i, j) = X[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return M;
}

inline localgp::Vector to_vector(const oracle::Vec& v) {
  localgp::Vector out(static_cast<localgp::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out[static_cast<localgp::Index>(i)] = v[i];
  return out;
}

inline oracle::Mat to_rows(const localgp::RowMatrix& M) {
  oracle::Mat X(static_cast<std::size_t>(M.rows()), oracle::Vec(static_cast<std::size_t>(M.cols())));
  for (localgp::Index i = 0; i < M.rows(); ++i) {
    for (localgp::Index j = 0; j < M.cols(); ++j) {
      X[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = M(i, j);
    }
  }
  return X;
}

inline localgp::Point pt(const oracle::Vec& v) { return {v.data(), v.size()}; }

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

// Smooth test response on [0,1]^p.
inline double smooth(const oracle::Vec& x) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += std::sin(3.0 * x[k] + 0.5 * static_cast<double>(k));
  return s;
}

inline oracle::Vec responses(const oracle::Mat& X) {
  oracle::Vec y;
  for (const auto& x : X) y.push_back(smooth(x));
  return y;
}

}  // namespace testing_support
