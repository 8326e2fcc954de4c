#pragma once

#include "localgp/gp_state.hpp"
#include "localgp/local_design.hpp"
#include "localgp/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace localgp {

struct BatchResult {
  std::vector<Prediction> predictions;  // aligned with the predictive set
  std::vector<std::string> failures;    // empty string: location succeeded
  std::vector<double> theta;            // final local lengthscale per location
  double seconds = 0.0;                 // wall clock of the prediction loop
  SearchSpec spec;                      // resolved spec that produced the batch

  Index failed_count() const;
};

// Predicts every row of X_ref independently with local_predict, fanning out
// over `workers` threads. Results are placed by index, so the output does not
// depend on the worker count. A failing location is recorded in `failures`
// and its prediction is NaN; the batch carries on.
BatchResult predict_set(const RowMatrix& X_ref, const SearchContext& ctx, const SearchSpec& spec,
                        unsigned workers);

// Per-coordinate input divisors sqrt(theta_k) from a separable fit on a
// random data subset.
struct ScaleVector {
  std::vector<double> divisors;
  Index subset_size = 0;
  std::uint64_t seed = 0;

  // Divides column k by divisors[k]. Apply exactly once to raw inputs.
  RowMatrix apply(const RowMatrix& X) const;
};

struct Prescaled {
  Design design;
  ScaleVector scale;
};

// Fits separable lengthscales by MLE on `subset_size` rows drawn uniformly
// without replacement (seeded), then rescales the design inputs. Responses are
// untouched. Predictive inputs go through `scale.apply`.
Prescaled prescale(const Design& design, Index subset_size, std::uint64_t seed, double eta);

struct Metrics {
  double rmse = 0.0;
  double mse = 0.0;
  double mean_sd = 0.0;     // mean of sqrt(scale)
  double coverage95 = 0.0;  // fraction of truths inside the 95% interval
  Index count = 0;          // locations that contributed (failures skipped)
};

Metrics metrics(const BatchResult& batch, const Vector& y_true);
Metrics metrics(std::span<const Prediction> predictions, const Vector& y_true);

// Global GP on a random subset: the "sub" comparator. Isotropic or separable
// lengthscales by MLE on `subset_size` rows, then exact prediction at every
// row of X_ref.
BatchResult predict_subset_gp(const Design& design, const RowMatrix& X_ref, Index subset_size,
                              std::uint64_t seed, double eta, bool separable);

}  // namespace localgp
