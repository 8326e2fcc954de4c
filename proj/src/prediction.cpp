#include "localgp/prediction.hpp"

#include "localgp/inference.hpp"
#include "localgp/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace localgp {

Index BatchResult::failed_count() const {
  return static_cast<Index>(std::count_if(failures.begin(), failures.end(),
                                          [](const std::string& f) { return !f.empty(); }));
}

namespace {

Prediction failed_prediction() {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Prediction p;
  p.mean = p.scale = p.df = p.lower95 = p.upper95 = nan;
  return p;
}

Design subset_of(const Design& design, const std::vector<std::int64_t>& rows) {
  Design out;
  out.X.resize(static_cast<Index>(rows.size()), design.dim());
  out.Y.resize(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Index>(i)) = design.X.row(rows[i]);
    out.Y[static_cast<Index>(i)] = design.Y[rows[i]];
  }
  return out;
}

Design random_subset(const Design& design, Index subset_size, std::uint64_t seed) {
  if (subset_size < 2 || subset_size > design.size()) {
    throw std::invalid_argument("subset size must be in [2, N]");
  }
  Rng rng(seed);
  auto rows = sample_without_replacement(design.size(), subset_size, rng);
  std::sort(rows.begin(), rows.end());
  return subset_of(design, rows);
}

}  // namespace

BatchResult predict_set(const RowMatrix& X_ref, const SearchContext& ctx, const SearchSpec& spec,
                        unsigned workers) {
  if (X_ref.rows() < 1) throw std::invalid_argument("predict_set: empty predictive set");
  if (X_ref.cols() != ctx.design.dim()) {
    throw std::invalid_argument("predict_set: predictive set has the wrong dimension");
  }
  BatchResult batch;
  batch.spec = spec.resolved(ctx.design);
  batch.spec.validate(ctx.design.size());
  const Index M = X_ref.rows();
  batch.predictions.assign(static_cast<std::size_t>(M), failed_prediction());
  batch.failures.assign(static_cast<std::size_t>(M), std::string{});
  batch.theta.assign(static_cast<std::size_t>(M), std::numeric_limits<double>::quiet_NaN());

  const auto start = std::chrono::steady_clock::now();
  std::atomic<Index> next{0};
  auto work = [&] {
    for (Index i = next.fetch_add(1); i < M; i = next.fetch_add(1)) {
      const auto slot = static_cast<std::size_t>(i);
      try {
        LocalResult r = local_predict(row_of(X_ref, i), ctx, batch.spec);
        batch.predictions[slot] = r.prediction;
        batch.theta[slot] = r.trace.theta_final;
      } catch (const std::exception& e) {
        batch.failures[slot] = e.what();
      }
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(M)));
  if (threads == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
  }
  batch.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

RowMatrix ScaleVector::apply(const RowMatrix& X) const {
  if (static_cast<std::size_t>(X.cols()) != divisors.size()) {
    throw std::invalid_argument("ScaleVector: dimension mismatch");
  }
  RowMatrix out = X;
  for (Index c = 0; c < X.cols(); ++c) out.col(c) /= divisors[static_cast<std::size_t>(c)];
  return out;
}

Prescaled prescale(const Design& design, Index subset_size, std::uint64_t seed, double eta) {
  const Design sub = random_subset(design, subset_size, seed);
  const std::vector<double> theta = mle_theta_sep(sub.X, sub.Y, eta, default_theta0_sep(sub.X));

  Prescaled out;
  out.scale.subset_size = subset_size;
  out.scale.seed = seed;
  for (double t : theta) out.scale.divisors.push_back(std::sqrt(t));
  out.design.X = out.scale.apply(design.X);
  out.design.Y = design.Y;
  return out;
}

Metrics metrics(std::span<const Prediction> predictions, const Vector& y_true) {
  if (static_cast<Index>(predictions.size()) != y_true.size()) {
    throw std::invalid_argument("metrics: " + std::to_string(predictions.size()) +
                                " predictions but " + std::to_string(y_true.size()) + " truths");
  }
  Metrics m;
  double sse = 0.0;
  double sd = 0.0;
  Index covered = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    const Prediction& p = predictions[i];
    if (!std::isfinite(p.mean)) continue;
    const double y = y_true[static_cast<Index>(i)];
    sse += (p.mean - y) * (p.mean - y);
    sd += p.sd();
    if (y >= p.lower95 && y <= p.upper95) ++covered;
    ++m.count;
  }
  if (m.count == 0) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan, nan, 0};
  }
  const double n = static_cast<double>(m.count);
  m.mse = sse / n;
  m.rmse = std::sqrt(m.mse);
  m.mean_sd = sd / n;
  m.coverage95 = static_cast<double>(covered) / n;
  return m;
}

Metrics metrics(const BatchResult& batch, const Vector& y_true) {
  return metrics(std::span<const Prediction>(batch.predictions), y_true);
}

BatchResult predict_subset_gp(const Design& design, const RowMatrix& X_ref, Index subset_size,
                              std::uint64_t seed, double eta, bool separable) {
  const auto start = std::chrono::steady_clock::now();
  const Design sub = random_subset(design, subset_size, seed);
  KernelParams params;
  if (separable) {
    params = KernelParams::separable(mle_theta_sep(sub.X, sub.Y, eta, default_theta0_sep(sub.X)), eta);
  } else {
    params = KernelParams::isotropic(mle_theta(sub.X, sub.Y, eta, default_theta0(sub.X)).theta, eta);
  }
  const GpState state = GpState::build(sub.X, sub.Y, params);

  // Batched predictive equations; same formulas as GpState::predict.
  const Matrix kx = cross_correlation(state.params(), X_ref, state.X());
  const Vector w = state.whiten(state.Y());
  const Matrix W = state.whiten(Matrix(kx.transpose()));
  const double j = static_cast<double>(state.size());
  const double t975 = student_t_975(j);

  BatchResult batch;
  batch.predictions.resize(static_cast<std::size_t>(X_ref.rows()));
  batch.failures.assign(static_cast<std::size_t>(X_ref.rows()), std::string{});
  batch.theta.assign(static_cast<std::size_t>(X_ref.rows()), params.theta.front());
  for (Index i = 0; i < X_ref.rows(); ++i) {
    Prediction& p = batch.predictions[static_cast<std::size_t>(i)];
    p.mean = W.col(i).dot(w);
    const double b = std::max(0.0, state.prior_variance() - W.col(i).squaredNorm());
    p.scale = state.psi() * b / j;
    p.df = j;
    if (j > 2.0) p.variance = p.scale * j / (j - 2.0);
    p.lower95 = p.mean - t975 * std::sqrt(p.scale);
    p.upper95 = p.mean + t975 * std::sqrt(p.scale);
  }
  batch.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return batch;
}

}  // namespace localgp
