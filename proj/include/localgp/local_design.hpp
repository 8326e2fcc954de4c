#pragma once

#include "localgp/gp_state.hpp"
#include "localgp/inference.hpp"
#include "localgp/neighbors.hpp"
#include "localgp/types.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace localgp {

enum class SearchMethod { NearestNeighbor, AlcExhaustive, AlcRay };

std::string_view to_string(SearchMethod method);
// Accepts "nn", "alc-ex" and "alc-ray".
SearchMethod parse_method(std::string_view name);

struct SearchSpec {
  SearchMethod method = SearchMethod::AlcRay;
  Index n0 = 6;
  Index n = 50;
  Index n_prime = 1000;             // candidate pool for alc-ex
  std::optional<Index> num_rays;     // defaults to the input dimension
  int stages = 1;
  std::optional<double> fixed_theta; // unset: local MLE
  std::optional<ThetaBounds> bounds; // MLE box; unset: default_theta0 of the design
  double eta = 1e-10;

  bool mle() const { return !fixed_theta.has_value(); }

  // Throws std::invalid_argument when the fields are inconsistent for a
  // design of N rows.
  void validate(Index N) const;

  // Copy with num_rays and (for MLE) bounds filled in for `design`.
  SearchSpec resolved(const Design& design) const;
};

// How a design point was chosen.
enum class StepOrigin {
  InitNN,        // initial nearest neighbors, or an NN design
  Exhaustive,    // argmax over the candidate pool
  NNMode,        // ray search settled at its starting point (s = 0)
  InteriorMode,  // ray search optimum away from the start, snapped to the design
  Fallback,      // no usable ray; nearest remaining row
};

std::string_view to_string(StepOrigin origin);

struct LocalDesignTrace {
  std::vector<Index> order;        // global row indices in selection order
  std::vector<StepOrigin> origin;  // aligned with order
  std::vector<double> theta_used;  // lengthscale each stage's design was built with
  double theta_final = 0.0;        // lengthscale behind the prediction
  int rays_searched = 0;
  int rays_interior = 0;
  bool mle_failed = false;         // likelihood broke down; last finite theta kept
};

struct LocalDesign {
  GpState state;
  LocalDesignTrace trace;
};

// The shared, read-only data every local search needs.
struct SearchContext {
  const Design& design;
  const NeighborIndex& index;
  std::vector<double> box_lo;
  std::vector<double> box_hi;

  SearchContext(const Design& design, const NeighborIndex& index);
};

LocalDesign build_nn(Point x, const SearchContext& ctx, const SearchSpec& spec);

LocalDesign build_alc_ex(Point x, const SearchContext& ctx, const SearchSpec& spec, double theta);

// Exhaustive search stopped once the design holds `size` points (used to
// capture intermediate states for surface dumps).
LocalDesign build_alc_ex_partial(Point x, const SearchContext& ctx, const SearchSpec& spec,
                                 double theta, Index size);

LocalDesign build_alc_ray(Point x, const SearchContext& ctx, const SearchSpec& spec, double theta);

// Round-robin ranks for the ray starting points at greedy step j:
// k = (j - n0 + 1) mod floor(sqrt(j - n0 + 1)), ranks k .. k + num_rays - 1,
// 0-based into the distance-ordered remaining candidates.
std::vector<Index> ray_start_indices(Index j, Index n0, Index num_rays);

struct RaySegment {
  Vector start;
  Vector end;
  bool degenerate = false;

  // (1 - s) * start + s * end
  Vector at(double s) const;
};

// Segment from x_start away from x, ten times the start's distance from x,
// pulled back toward x_start until it fits inside the bounding box.
RaySegment make_ray(Point x, Point x_start, std::span<const double> box_lo,
                    std::span<const double> box_hi);

struct LocalResult {
  Prediction prediction;
  LocalDesignTrace trace;
};

// One- or two-stage local prediction at x. Stage 1 builds a design with the
// fixed theta (or bounds.init), then estimates theta when in MLE mode. Stage 2
// (greedy methods only) rebuilds the design from scratch with that estimate
// and re-estimates on the rebuilt design.
LocalResult local_predict(Point x, const SearchContext& ctx, const SearchSpec& spec);

}  // namespace localgp
