#include "localgp/gp_state.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace localgp {

namespace {

bool has_duplicate_rows(const RowMatrix& X) {
  for (Index a = 0; a < X.rows(); ++a) {
    for (Index b = 0; b < a; ++b) {
      if (X.row(a) == X.row(b)) return true;
    }
  }
  return false;
}

struct Factorization {
  Eigen::LLT<Matrix> llt;
  bool ok = false;
  double min_pivot = 0.0;
};

Factorization factorize(const Matrix& K) {
  Factorization f;
  f.llt.compute(K);
  if (f.llt.info() != Eigen::Success) return f;
  const Vector diag = f.llt.matrixLLT().diagonal();
  f.min_pivot = diag.array().square().minCoeff();
  const double scale = K.diagonal().maxCoeff();
  f.ok = std::isfinite(f.min_pivot) &&
         f.min_pivot > std::numeric_limits<double>::epsilon() * scale;
  return f;
}

}  // namespace

double Prediction::sd() const { return std::sqrt(scale); }

double student_t_975(double df) {
  boost::math::students_t dist(df);
  return boost::math::quantile(dist, 0.975);
}

GpState GpState::build(RowMatrix X, Vector Y, const KernelParams& params) {
  if (X.rows() < 1) throw std::invalid_argument("build_state: empty design");
  if (X.rows() != Y.size()) {
    throw std::invalid_argument("build_state: X has " + std::to_string(X.rows()) +
                                " rows but Y has " + std::to_string(Y.size()));
  }
  if (!X.allFinite() || !Y.allFinite()) {
    throw std::invalid_argument("build_state: non-finite design entries");
  }
  params.validate(X.cols());

  GpState state;
  state.params_ = params;
  Matrix K = correlation_matrix(params, X);
  Factorization f = factorize(K);
  if (!f.ok) {
    if (params.eta == 0.0 && has_duplicate_rows(X)) {
      throw FactorizationError("build_state: duplicated design rows with zero nugget",
                               f.min_pivot, 0.0);
    }
    const double eta = std::max(params.eta, kEscalatedNugget);
    if (eta > params.eta) {
      K.diagonal().array() += eta - params.eta;
      state.params_.eta = eta;
      state.escalated_ = true;
      f = factorize(K);
    }
    if (!f.ok) {
      const double rcond = f.llt.info() == Eigen::Success ? f.llt.rcond() : 0.0;
      std::ostringstream msg;
      msg << "build_state: correlation matrix of size " << X.rows()
          << " is not positive definite (min pivot " << f.min_pivot << ", rcond " << rcond
          << ", nugget " << state.params_.eta << ")";
      throw FactorizationError(msg.str(), f.min_pivot, rcond);
    }
  }

  state.Kinv_ = f.llt.solve(Matrix::Identity(K.rows(), K.cols()));
  state.Kinv_ = 0.5 * (state.Kinv_ + state.Kinv_.transpose()).eval();
  state.L_ = f.llt.matrixL();
  state.logdet_ = 2.0 * state.L_.diagonal().array().log().sum();
  state.w_ = f.llt.matrixL().solve(Y);
  state.psi_ = state.w_.squaredNorm();
  state.X_ = std::move(X);
  state.Y_ = std::move(Y);
  return state;
}

Vector GpState::whiten(const Vector& k) const {
  return L_.triangularView<Eigen::Lower>().solve(k);
}

Matrix GpState::whiten(const Matrix& B) const {
  return L_.triangularView<Eigen::Lower>().solve(B);
}

double GpState::bracket(Point x) const {
  const double b = prior_variance() - whiten(cross_corr(x)).squaredNorm();
  return b > 0.0 ? b : 0.0;
}

double GpState::log_marg_lik() const {
  const double j = static_cast<double>(size());
  return std::lgamma(0.5 * j) - 0.5 * j * std::log(2.0 * std::numbers::pi) -
         0.5 * logdet_ - 0.5 * j * std::log(0.5 * psi_);
}

Prediction GpState::predict(Point x) const {
  if (static_cast<Index>(x.size()) != dim()) {
    throw std::invalid_argument("predict: location has dimension " +
                                std::to_string(x.size()) + ", design has " +
                                std::to_string(dim()));
  }
  const Vector l = whiten(cross_corr(x));
  const double j = static_cast<double>(size());

  Prediction out;
  out.mean = l.dot(w_);
  const double b = std::max(0.0, prior_variance() - l.squaredNorm());
  out.scale = psi_ * b / j;
  out.df = j;
  if (j > 2.0) out.variance = out.scale * j / (j - 2.0);
  const double half = student_t_975(j) * std::sqrt(out.scale);
  out.lower95 = out.mean - half;
  out.upper95 = out.mean + half;
  return out;
}

void GpState::extend(Point x_new, double y_new) {
  if (static_cast<Index>(x_new.size()) != dim()) {
    throw std::invalid_argument("extend: dimension mismatch");
  }
  const Index j = size();
  const Vector l = whiten(cross_corr(x_new));
  const double v = prior_variance() - l.squaredNorm();
  if (!(v > degeneracy_tolerance(params_.eta))) {
    std::ostringstream msg;
    msg << "extend: remaining variance " << v << " at or below tolerance "
        << degeneracy_tolerance(params_.eta);
    throw DegenerateExtension(msg.str(), v);
  }
  const Vector a = L_.triangularView<Eigen::Lower>().transpose().solve(l);
  const double d = std::sqrt(v);

  Matrix next(j + 1, j + 1);
  next.topLeftCorner(j, j) = Kinv_;
  next.topLeftCorner(j, j).noalias() += (a / v) * a.transpose();
  next.col(j).head(j) = -a / v;
  next.row(j).head(j) = (-a / v).transpose();
  next(j, j) = 1.0 / v;
  Kinv_ = std::move(next);

  L_.conservativeResize(j + 1, j + 1);
  L_.col(j).setZero();
  L_.row(j).head(j) = l.transpose();
  L_(j, j) = d;

  const double resid = (y_new - l.dot(w_)) / d;
  w_.conservativeResize(j + 1);
  w_[j] = resid;
  psi_ += resid * resid;
  logdet_ += std::log(v);

  // x_new may alias storage that the resize below reallocates.
  const Eigen::RowVectorXd row = Eigen::Map<const Eigen::RowVectorXd>(x_new.data(), dim());
  X_.conservativeResize(j + 1, Eigen::NoChange);
  X_.row(j) = row;
  Y_.conservativeResize(j + 1);
  Y_[j] = y_new;
}

GpState build_state(RowMatrix X, Vector Y, const KernelParams& params) {
  return GpState::build(std::move(X), std::move(Y), params);
}

double log_marg_lik(const GpState& state) { return state.log_marg_lik(); }

Prediction predict(const GpState& state, Point x) { return state.predict(x); }

GpState extend_state(const GpState& state, Point x_new, double y_new) {
  GpState next = state;
  next.extend(x_new, y_new);
  return next;
}

}  // namespace localgp
