#include "localgp/local_design.hpp"

#include "localgp/alc.hpp"
#include "localgp/kernel.hpp"
#include "localgp/optim1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace localgp {

std::string_view to_string(SearchMethod method) {
  switch (method) {
    case SearchMethod::NearestNeighbor:
      return "nn";
    case SearchMethod::AlcExhaustive:
      return "alc-ex";
    case SearchMethod::AlcRay:
      return "alc-ray";
  }
  return "?";
}

SearchMethod parse_method(std::string_view name) {
  if (name == "nn") return SearchMethod::NearestNeighbor;
  if (name == "alc-ex") return SearchMethod::AlcExhaustive;
  if (name == "alc-ray") return SearchMethod::AlcRay;
  throw std::invalid_argument("unknown search method '" + std::string(name) +
                              "' (expected nn, alc-ex or alc-ray)");
}

std::string_view to_string(StepOrigin origin) {
  switch (origin) {
    case StepOrigin::InitNN:
      return "init-nn";
    case StepOrigin::Exhaustive:
      return "exhaustive";
    case StepOrigin::NNMode:
      return "nn-mode";
    case StepOrigin::InteriorMode:
      return "interior-mode";
    case StepOrigin::Fallback:
      return "fallback";
  }
  return "?";
}

void SearchSpec::validate(Index N) const {
  if (n0 < 1 || n0 > n || n > N) {
    throw std::invalid_argument("SearchSpec: need 1 <= n0 <= n <= N (n0=" + std::to_string(n0) +
                                ", n=" + std::to_string(n) + ", N=" + std::to_string(N) + ")");
  }
  if (method == SearchMethod::AlcExhaustive && n_prime < n) {
    throw std::invalid_argument("SearchSpec: need nprime >= n for alc-ex");
  }
  if (num_rays && *num_rays < 1) throw std::invalid_argument("SearchSpec: need rays >= 1");
  if (stages != 1 && stages != 2) throw std::invalid_argument("SearchSpec: stages must be 1 or 2");
  if (fixed_theta && !(*fixed_theta > 0.0)) {
    throw std::invalid_argument("SearchSpec: fixed theta must be positive");
  }
  if (bounds) bounds->validate();
  if (!(eta >= 0.0)) throw std::invalid_argument("SearchSpec: nugget must be nonnegative");
}

SearchSpec SearchSpec::resolved(const Design& design) const {
  SearchSpec out = *this;
  if (!out.num_rays) out.num_rays = design.dim();
  if (out.mle() && !out.bounds) out.bounds = default_theta0(design.X);
  return out;
}

SearchContext::SearchContext(const Design& d, const NeighborIndex& idx)
    : design(d), index(idx) {
  if (d.size() != idx.size() || d.dim() != idx.dim()) {
    throw std::invalid_argument("SearchContext: index does not match design");
  }
  if (d.Y.size() != d.size()) throw std::invalid_argument("SearchContext: response length mismatch");
  box_lo.resize(static_cast<std::size_t>(d.dim()));
  box_hi.resize(static_cast<std::size_t>(d.dim()));
  for (Index c = 0; c < d.dim(); ++c) {
    box_lo[static_cast<std::size_t>(c)] = d.X.col(c).minCoeff();
    box_hi[static_cast<std::size_t>(c)] = d.X.col(c).maxCoeff();
  }
}

namespace {

GpState state_from_rows(const Design& design, const std::vector<Index>& rows,
                        const KernelParams& params) {
  RowMatrix X(static_cast<Index>(rows.size()), design.dim());
  Vector Y(static_cast<Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    X.row(static_cast<Index>(i)) = design.X.row(rows[i]);
    Y[static_cast<Index>(i)] = design.Y[rows[i]];
  }
  return GpState::build(std::move(X), std::move(Y), params);
}

// Greater reduction wins; equal reductions go to the smaller row index.
bool better(double value, Index row, double best_value, Index best_row) {
  return value > best_value || (value == best_value && row < best_row);
}

}  // namespace

LocalDesign build_nn(Point x, const SearchContext& ctx, const SearchSpec& spec) {
  const Design& design = ctx.design;
  if (spec.n > design.size()) {
    throw std::invalid_argument("build_nn: n exceeds the design size");
  }
  const double theta = spec.fixed_theta.value_or(spec.bounds ? spec.bounds->init : 1.0);
  LocalDesignTrace trace;
  trace.order = ctx.index.nearest(x, spec.n);
  trace.origin.assign(trace.order.size(), StepOrigin::InitNN);
  trace.theta_used.push_back(theta);
  GpState state = state_from_rows(design, trace.order, KernelParams::isotropic(theta, spec.eta));
  return {std::move(state), std::move(trace)};
}

LocalDesign build_alc_ex_partial(Point x, const SearchContext& ctx, const SearchSpec& spec,
                                 double theta, Index size) {
  const Design& design = ctx.design;
  spec.validate(design.size());
  const KernelParams params = KernelParams::isotropic(theta, spec.eta);
  const Index pool_size = std::min(spec.n_prime, design.size());
  const std::vector<Index> pool = ctx.index.nearest(x, pool_size);
  const Index m = pool_size;

  LocalDesignTrace trace;
  trace.order.assign(pool.begin(), pool.begin() + spec.n0);
  trace.origin.assign(static_cast<std::size_t>(spec.n0), StepOrigin::InitNN);
  trace.theta_used.push_back(theta);
  GpState state = state_from_rows(design, trace.order, params);

  // Cross-correlations of the whole pool against the growing design, one
  // column per design point, plus against x itself.
  Matrix kc(m, size);
  Vector kref(m);
  std::vector<char> active(static_cast<std::size_t>(m), 1);
  for (Index i = 0; i < m; ++i) {
    const Point cand = design.row(pool[static_cast<std::size_t>(i)]);
    kref[i] = correlation(params, cand, x, false);
    for (Index c = 0; c < spec.n0; ++c) {
      kc(i, c) = correlation(params, cand, design.row(trace.order[static_cast<std::size_t>(c)]), false);
    }
  }
  for (Index i = 0; i < spec.n0; ++i) active[static_cast<std::size_t>(i)] = 0;

  for (Index j = spec.n0; j < size; ++j) {
    const AlcEvaluator criterion(state, x);
    const Vector values = criterion.batch(kc.leftCols(j), kref);
    Index pick = -1;
    double best = kInadmissible;
    for (Index i = 0; i < m; ++i) {
      if (!active[static_cast<std::size_t>(i)] || values[i] == kInadmissible) continue;
      if (pick < 0 || better(values[i], pool[static_cast<std::size_t>(i)], best,
                             pool[static_cast<std::size_t>(pick)])) {
        pick = i;
        best = values[i];
      }
    }
    if (pick < 0) {
      throw DegenerateExtension("alc-ex: every candidate in the pool is inadmissible", 0.0);
    }
    const Index row = pool[static_cast<std::size_t>(pick)];
    state.extend(design.row(row), design.Y[row]);
    trace.order.push_back(row);
    trace.origin.push_back(StepOrigin::Exhaustive);
    active[static_cast<std::size_t>(pick)] = 0;
    for (Index i = 0; i < m; ++i) {
      kc(i, j) = correlation(params, design.row(pool[static_cast<std::size_t>(i)]), design.row(row),
                             false);
    }
  }
  return {std::move(state), std::move(trace)};
}

LocalDesign build_alc_ex(Point x, const SearchContext& ctx, const SearchSpec& spec, double theta) {
  return build_alc_ex_partial(x, ctx, spec, theta, spec.n);
}

std::vector<Index> ray_start_indices(Index j, Index n0, Index num_rays) {
  if (j < n0) throw std::invalid_argument("ray_start_indices: need j >= n0");
  const Index t = j - n0 + 1;
  const auto modulus = static_cast<Index>(std::floor(std::sqrt(static_cast<double>(t))));
  const Index k = t % modulus;
  std::vector<Index> ranks(static_cast<std::size_t>(num_rays));
  for (Index r = 0; r < num_rays; ++r) ranks[static_cast<std::size_t>(r)] = k + r;
  return ranks;
}

Vector RaySegment::at(double s) const { return (1.0 - s) * start + s * end; }

RaySegment make_ray(Point x, Point x_start, std::span<const double> box_lo,
                    std::span<const double> box_hi) {
  const std::size_t p = x.size();
  if (x_start.size() != p || box_lo.size() != p || box_hi.size() != p) {
    throw std::invalid_argument("make_ray: dimension mismatch");
  }
  RaySegment seg;
  seg.start = Eigen::Map<const Vector>(x_start.data(), static_cast<Index>(p));
  const Eigen::Map<const Vector> origin(x.data(), static_cast<Index>(p));
  if ((seg.start - origin).squaredNorm() == 0.0) {
    throw std::invalid_argument("make_ray: start coincides with the reference location");
  }
  // x + 10 |x_start - x| d with d the unit direction is x + 10 (x_start - x).
  const Vector raw_end = origin + 10.0 * (seg.start - origin);
  const Vector delta = raw_end - seg.start;

  double t = 1.0;
  for (std::size_t c = 0; c < p; ++c) {
    const auto ci = static_cast<Index>(c);
    if (delta[ci] > 0.0) {
      t = std::min(t, (box_hi[c] - seg.start[ci]) / delta[ci]);
    } else if (delta[ci] < 0.0) {
      t = std::min(t, (box_lo[c] - seg.start[ci]) / delta[ci]);
    }
  }
  t = std::max(t, 0.0);
  seg.end = seg.start + t * delta;
  seg.degenerate = !((seg.end - seg.start).squaredNorm() > 0.0);
  return seg;
}

LocalDesign build_alc_ray(Point x, const SearchContext& ctx, const SearchSpec& spec, double theta) {
  const Design& design = ctx.design;
  spec.validate(design.size());
  const Index num_rays = spec.num_rays.value_or(design.dim());
  const KernelParams params = KernelParams::isotropic(theta, spec.eta);

  LocalDesignTrace trace;
  trace.order = ctx.index.nearest(x, spec.n0);
  trace.origin.assign(trace.order.size(), StepOrigin::InitNN);
  trace.theta_used.push_back(theta);
  GpState state = state_from_rows(design, trace.order, params);

  std::vector<Index> excluded;
  for (Index j = spec.n0; j < spec.n; ++j) {
    const AlcEvaluator criterion(state, x);
    // Reduction as a finite objective: inadmissible points contribute nothing.
    const auto reduction = [&](Point p) {
      const double r = criterion(p);
      return r == kInadmissible ? 0.0 : r;
    };

    const std::vector<Index> ranks = ray_start_indices(j, spec.n0, num_rays);
    const Index remaining = design.size() - j;
    const Index needed = std::min(ranks.back() + 1, remaining);
    const std::vector<Index> near = ctx.index.nearest(x, needed, trace.order);

    struct Candidate {
      Index row;
      StepOrigin origin;
    };
    std::vector<Candidate> candidates;
    for (Index rank : ranks) {
      if (rank >= static_cast<Index>(near.size())) break;
      const Index start_row = near[static_cast<std::size_t>(rank)];
      const Point start = design.row(start_row);
      if (sq_dist(start, x) == 0.0) continue;
      const RaySegment seg = make_ray(x, start, ctx.box_lo, ctx.box_hi);
      ++trace.rays_searched;
      if (seg.degenerate) {
        candidates.push_back({start_row, StepOrigin::NNMode});
        continue;
      }
      const auto objective = [&](double s) {
        const Vector xs = seg.at(s);
        return -reduction(as_point(xs));
      };
      const LineResult line = brent_min(objective, 0.0, 1.0, 1e-4);
      const double at_start = -reduction(start);
      if (at_start <= line.f_star) {
        candidates.push_back({start_row, StepOrigin::NNMode});
      } else {
        excluded = trace.order;
        excluded.push_back(start_row);
        const Vector x_star = seg.at(line.s_star);
        candidates.push_back({ctx.index.snap(as_point(x_star), excluded), StepOrigin::InteriorMode});
        ++trace.rays_interior;
      }
    }

    Index pick = -1;
    StepOrigin pick_origin = StepOrigin::Fallback;
    double best = kInadmissible;
    for (const Candidate& c : candidates) {
      const double value = criterion(design.row(c.row));
      if (value == kInadmissible) continue;
      if (pick < 0 || better(value, c.row, best, pick)) {
        pick = c.row;
        best = value;
        pick_origin = c.origin;
      }
    }
    if (pick < 0) {
      pick = ctx.index.nearest(x, 1, trace.order).front();
      pick_origin = StepOrigin::Fallback;
    }
    state.extend(design.row(pick), design.Y[pick]);
    trace.order.push_back(pick);
    trace.origin.push_back(pick_origin);
  }
  return {std::move(state), std::move(trace)};
}

namespace {

LocalDesign build_design(Point x, const SearchContext& ctx, const SearchSpec& spec, double theta) {
  switch (spec.method) {
    case SearchMethod::NearestNeighbor: {
      SearchSpec fixed = spec;
      fixed.fixed_theta = theta;
      return build_nn(x, ctx, fixed);
    }
    case SearchMethod::AlcExhaustive:
      return build_alc_ex(x, ctx, spec, theta);
    case SearchMethod::AlcRay:
      return build_alc_ray(x, ctx, spec, theta);
  }
  throw std::logic_error("unknown search method");
}

// MLE on the design's data; a likelihood breakdown keeps the last finite theta.
double estimate(const GpState& state, const ThetaBounds& bounds, double start, double eta,
                LocalDesignTrace& trace) {
  ThetaBounds box = bounds;
  box.init = std::clamp(start, bounds.lo, bounds.hi);
  try {
    return mle_theta(state.X(), state.Y(), eta, box).theta;
  } catch (const EstimationError& e) {
    trace.mle_failed = true;
    return e.last_valid_theta();
  }
}

}  // namespace

LocalResult local_predict(Point x, const SearchContext& ctx, const SearchSpec& spec_in) {
  const SearchSpec spec = (spec_in.num_rays && (spec_in.bounds || !spec_in.mle()))
                              ? spec_in
                              : spec_in.resolved(ctx.design);
  spec.validate(ctx.design.size());
  if (static_cast<Index>(x.size()) != ctx.design.dim()) {
    throw std::invalid_argument("local_predict: location dimension mismatch");
  }

  const double theta0 = spec.mle() ? spec.bounds->init : *spec.fixed_theta;
  LocalDesign local = build_design(x, ctx, spec, theta0);
  double theta = theta0;
  bool mle_failed = false;
  if (spec.mle()) {
    theta = estimate(local.state, *spec.bounds, theta0, spec.eta, local.trace);
    mle_failed = local.trace.mle_failed;
  }

  if (spec.stages == 2 && spec.method != SearchMethod::NearestNeighbor && theta != theta0) {
    LocalDesign redesign = build_design(x, ctx, spec, theta);
    redesign.trace.theta_used.insert(redesign.trace.theta_used.begin(),
                                     local.trace.theta_used.begin(), local.trace.theta_used.end());
    redesign.trace.rays_searched += local.trace.rays_searched;
    redesign.trace.rays_interior += local.trace.rays_interior;
    local = std::move(redesign);
    if (spec.mle()) {
      theta = estimate(local.state, *spec.bounds, theta, spec.eta, local.trace);
    }
  }
  local.trace.mle_failed = local.trace.mle_failed || mle_failed;
  local.trace.theta_final = theta;

  const double design_theta = local.trace.theta_used.back();
  if (theta == design_theta && !local.state.nugget_escalated()) {
    return {local.state.predict(x), std::move(local.trace)};
  }
  const GpState final_state = GpState::build(local.state.X(), local.state.Y(),
                                             KernelParams::isotropic(theta, spec.eta));
  return {final_state.predict(x), std::move(local.trace)};
}

}  // namespace localgp
