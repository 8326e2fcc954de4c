#include "localgp/inference.hpp"

#include "localgp/gp_state.hpp"
#include "localgp/optim1d.hpp"
#include "localgp/rng.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

namespace localgp {

void ThetaBounds::validate() const {
  if (!(lo > 0.0 && lo <= init && init <= hi && std::isfinite(hi))) {
    std::ostringstream msg;
    msg << "ThetaBounds: need 0 < lo <= init <= hi, got lo=" << lo << " init=" << init
        << " hi=" << hi;
    throw std::invalid_argument(msg.str());
  }
}

LikelihoodValue log_lik_and_grad(const RowMatrix& X, const Vector& Y,
                                 const KernelParams& params, int coordinate) {
  params.validate(X.cols());
  const Index j = X.rows();
  const Matrix K = correlation_matrix(params, X);
  Eigen::LLT<Matrix> llt(K);
  const double min_pivot = llt.info() == Eigen::Success
                               ? llt.matrixLLT().diagonal().array().square().minCoeff()
                               : 0.0;
  if (llt.info() != Eigen::Success ||
      !(min_pivot > std::numeric_limits<double>::epsilon() * K.diagonal().maxCoeff())) {
    std::ostringstream msg;
    msg << "log likelihood: correlation matrix not positive definite at theta="
        << params.theta.front();
    throw FactorizationError(msg.str(), min_pivot, 0.0);
  }

  const Vector alpha = llt.solve(Y);
  const double psi = Y.dot(alpha);
  const double logdet = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  const double n = static_cast<double>(j);

  LikelihoodValue out;
  out.loglik = std::lgamma(0.5 * n) - 0.5 * n * std::log(2.0 * std::numbers::pi) -
               0.5 * logdet - 0.5 * n * std::log(0.5 * psi);
  if (coordinate < 0 || j < 2) return out;

  const Matrix Kinv = llt.solve(Matrix::Identity(j, j));
  const bool iso = params.is_isotropic();
  const auto k = static_cast<Index>(coordinate);
  const double theta = iso ? params.theta.front() : params.theta[static_cast<std::size_t>(k)];

  // dK_ab = K_ab * d_ab / theta^2, with d the squared distance (isotropic)
  // or the squared difference in coordinate k (separable). Zero on the diagonal.
  double trace = 0.0;
  double quad = 0.0;
  for (Index b = 0; b < j; ++b) {
    for (Index a = 0; a < b; ++a) {
      double d;
      if (iso) {
        d = sq_dist(row_of(X, a), row_of(X, b));
      } else {
        const double diff = X(a, k) - X(b, k);
        d = diff * diff;
      }
      const double dK = K(a, b) * d / (theta * theta);
      trace += 2.0 * Kinv(a, b) * dK;
      quad += 2.0 * alpha[a] * alpha[b] * dK;
    }
  }
  out.dtheta = -0.5 * trace + 0.5 * n * quad / psi;
  return out;
}

double log_lik(const RowMatrix& X, const Vector& Y, const KernelParams& params) {
  return log_lik_and_grad(X, Y, params, -1).loglik;
}

double dlog_marg_lik_dtheta(const RowMatrix& X, const Vector& Y, const KernelParams& params) {
  if (!params.is_isotropic()) {
    throw std::invalid_argument("dlog_marg_lik_dtheta: isotropic lengthscale expected");
  }
  return log_lik_and_grad(X, Y, params, 0).dtheta;
}

namespace {

using Objective = std::function<LikelihoodValue(double theta)>;

struct Probe {
  double phi = 0.0;
  double theta = 0.0;
  double loglik = 0.0;
  double slope = 0.0;  // d loglik / d log(theta)
  double dtheta = 0.0;
};

// Maximizes a likelihood in one lengthscale over [lo, hi], working in
// log(theta). The returned point is never worse than `start`.
MleResult maximize_log_scale(const Objective& objective, const ThetaBounds& bounds,
                             double start) {
  bounds.validate();
  int iterations = 0;
  double last_valid = start;

  auto probe = [&](double theta) {
    Probe p;
    p.theta = theta;
    p.phi = std::log(theta);
    ++iterations;
    LikelihoodValue value;
    try {
      value = objective(theta);
    } catch (const NumericalError& e) {
      throw EstimationError(std::string("mle: ") + e.what(), last_valid);
    }
    if (!std::isfinite(value.loglik) || !std::isfinite(value.dtheta)) {
      std::ostringstream msg;
      msg << "mle: non-finite likelihood at theta=" << theta;
      throw EstimationError(msg.str(), last_valid);
    }
    last_valid = theta;
    p.loglik = value.loglik;
    p.dtheta = value.dtheta;
    p.slope = theta * value.dtheta;
    return p;
  };

  if (bounds.lo == bounds.hi) {
    const Probe p = probe(bounds.lo);
    return {p.theta, p.loglik, iterations};
  }

  const double phi_lo = std::log(bounds.lo);
  const double phi_hi = std::log(bounds.hi);
  auto converged = [](const Probe& p) {
    return std::fabs(p.dtheta) <= 1e-5 * (1.0 + std::fabs(p.loglik));
  };
  auto theta_at = [&](double phi) {
    if (phi <= phi_lo) return bounds.lo;
    if (phi >= phi_hi) return bounds.hi;
    return std::exp(phi);
  };

  const Probe first = probe(std::clamp(start, bounds.lo, bounds.hi));
  Probe best = first;
  auto keep_best = [&](const Probe& p) {
    if (p.loglik > best.loglik) best = p;
  };
  // A converged point is returned unless it lost ground against the start.
  auto finish = [&](const Probe& p) -> MleResult {
    const Probe& out = (p.loglik >= first.loglik - 1e-12) ? p : best;
    return {out.theta, out.loglik, iterations};
  };
  if (converged(first)) return finish(first);

  // Bracket a sign change of the slope, doubling the step in log(theta).
  Probe lower;
  Probe upper;
  Probe prev = first;
  Probe cur = first;
  const bool ascending = first.slope > 0.0;
  double step = 1.0;
  for (;;) {
    const double target = ascending ? std::min(cur.phi + step, phi_hi)
                                    : std::max(cur.phi - step, phi_lo);
    const bool at_bound = ascending ? target >= phi_hi : target <= phi_lo;
    prev = cur;
    cur = probe(theta_at(target));
    keep_best(cur);
    if (converged(cur)) return finish(cur);
    const bool crossed = ascending ? cur.slope < 0.0 : cur.slope > 0.0;
    if (crossed) {
      lower = ascending ? prev : cur;
      upper = ascending ? cur : prev;
      break;
    }
    if (at_bound) {
      // Likelihood still rising toward the bound: pinned there.
      return finish(cur.loglik >= best.loglik ? cur : best);
    }
    step *= 2.0;
  }

  // Secant-Newton on the slope inside [lower, upper], bisection safeguard.
  while (iterations < 100) {
    const double curvature = (cur.slope - prev.slope) / (cur.phi - prev.phi);
    if (!(curvature < 0.0) || !std::isfinite(curvature)) {
      const auto negll = [&](double phi) { return -probe(theta_at(phi)).loglik; };
      const LineResult line = brent_min(negll, lower.phi, upper.phi, 1e-8);
      Probe golden = probe(theta_at(line.s_star));
      keep_best(golden);
      return finish(best);
    }
    double phi_next = cur.phi - cur.slope / curvature;
    if (!(phi_next > lower.phi && phi_next < upper.phi)) {
      phi_next = 0.5 * (lower.phi + upper.phi);
    }
    prev = cur;
    cur = probe(theta_at(phi_next));
    keep_best(cur);
    if (converged(cur) || upper.phi - lower.phi < 1e-10) return finish(cur);
    if (cur.slope > 0.0) {
      lower = cur;
    } else {
      upper = cur;
    }
  }
  return finish(best);
}

}  // namespace

MleResult mle_theta(const RowMatrix& X, const Vector& Y, double eta, const ThetaBounds& bounds) {
  bounds.validate();
  const Objective objective = [&](double theta) {
    return log_lik_and_grad(X, Y, KernelParams::isotropic(theta, eta), 0);
  };
  return maximize_log_scale(objective, bounds, bounds.init);
}

std::vector<double> mle_theta_sep(const RowMatrix& X, const Vector& Y, double eta,
                                  std::span<const ThetaBounds> bounds) {
  const auto p = static_cast<std::size_t>(X.cols());
  if (p < 1) throw std::invalid_argument("mle_theta_sep: need p >= 1");
  if (bounds.size() != p) {
    throw std::invalid_argument("mle_theta_sep: need one ThetaBounds per coordinate");
  }
  std::vector<double> theta(p);
  for (std::size_t k = 0; k < p; ++k) {
    bounds[k].validate();
    theta[k] = bounds[k].init;
  }
  if (p == 1) return {mle_theta(X, Y, eta, bounds[0]).theta};

  double current = log_lik(X, Y, KernelParams::separable(theta, eta));
  for (int sweep = 0; sweep < 10; ++sweep) {
    const double before = current;
    for (std::size_t k = 0; k < p; ++k) {
      const Objective objective = [&](double value) {
        std::vector<double> trial = theta;
        trial[k] = value;
        return log_lik_and_grad(X, Y, KernelParams::separable(std::move(trial), eta),
                                static_cast<int>(k));
      };
      const MleResult r = maximize_log_scale(objective, bounds[k], theta[k]);
      if (r.loglik >= current) {
        theta[k] = r.theta;
        current = r.loglik;
      }
    }
    if (current - before < 1e-6) break;
  }
  return theta;
}

ThetaBounds default_theta0(const RowMatrix& X) {
  const Index N = X.rows();
  std::vector<Index> rows;
  constexpr Index kMaxRows = 1000;
  if (N <= kMaxRows) {
    rows.resize(static_cast<std::size_t>(N));
    for (Index i = 0; i < N; ++i) rows[static_cast<std::size_t>(i)] = i;
  } else {
    Rng rng(0x5eed);
    for (auto i : sample_without_replacement(N, kMaxRows, rng)) rows.push_back(i);
    std::sort(rows.begin(), rows.end());
  }

  std::vector<double> d2;
  d2.reserve(rows.size() * (rows.size() - 1) / 2);
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      const double d = sq_dist(row_of(X, rows[a]), row_of(X, rows[b]));
      if (d > 0.0) d2.push_back(d);
    }
  }
  if (d2.empty()) {
    throw DataError("default_theta0: need at least two distinct design rows");
  }
  const double hi = *std::max_element(d2.begin(), d2.end());
  const std::size_t m = d2.size();
  const std::size_t q = (m + 9) / 10 - 1;  // inverse empirical CDF at 0.1
  std::nth_element(d2.begin(), d2.begin() + static_cast<std::ptrdiff_t>(q), d2.end());
  const double init = d2[q];
  return {init / 100.0, hi, init};
}

std::vector<ThetaBounds> default_theta0_sep(const RowMatrix& X) {
  ThetaBounds box = default_theta0(X);
  box.hi *= 100.0;
  return std::vector<ThetaBounds>(static_cast<std::size_t>(X.cols()), box);
}

}  // namespace localgp
