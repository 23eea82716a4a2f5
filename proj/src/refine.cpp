#include "regs/refine.hpp"

#include <algorithm>
#include <cmath>

#include "regs/errors.hpp"

namespace regs {

namespace {

std::vector<std::size_t> sorted_copy(const std::vector<std::size_t>& v) {
  std::vector<std::size_t> s(v);
  std::sort(s.begin(), s.end());
  return s;
}

double candidate_distance(const PointSet& ps, const Stencil& st, const Point& z) {
  const auto sites = gather(ps, st.indices);
  try {
    return convex_hull(sites, ps.dim(), z).dist_to_boundary;
  } catch (const DegenerateGeometryError&) {
    return -HUGE_VAL;
  }
}

bool admissible(const Candidate& c, double safety, double base_dist, double guard_fraction) {
  if (c.is_base) return true;
  if (!(c.dist_to_boundary >= safety * c.stencil.q)) return false;
  if (guard_fraction > 0.0 && c.dist_to_boundary < guard_fraction * base_dist) return false;
  return true;
}

}  // namespace

std::vector<Candidate> candidate_neighborhoods(const PointSet& ps, const Point& z, const Stencil& base,
                                               const ShiftConfig& cfg) {
  const int d = ps.dim();
  if (d > 2) throw InvalidSpecError("stencil shifting is limited to d = 1 and d = 2");
  if (cfg.c < 0.0) throw InvalidSpecError("safety factor must be non-negative");

  std::vector<Candidate> out;
  Candidate b;
  b.stencil = base;
  b.is_base = true;
  b.dist_to_boundary = candidate_distance(ps, base, z);
  out.push_back(b);
  const double base_dist = b.dist_to_boundary;

  std::vector<Point> dirs;
  try {
    const auto sites = gather(ps, base.indices);
    dirs = shift_directions(convex_hull(sites, d, z), z);
  } catch (const DegenerateGeometryError&) {
    return out;  // z on or outside the base hull: nothing to shift toward
  }

  std::vector<std::vector<std::size_t>> seen{sorted_copy(base.indices)};
  const double unit = cfg.unit == OffsetUnit::q ? base.q : base.rho;
  std::vector<double> radii;
  for (double o : cfg.offsets) {
    if (o > 0.0) radii.push_back(std::min(o * unit, base.rho));
  }
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  for (const Point& v : dirs) {
    for (double r : radii) {
      if (out.size() - 1 >= cfg.max_candidates) return out;
      Point center = z;
      for (int k = 0; k < d; ++k) center[k] += r * v[k];
      Candidate c;
      c.stencil = knn_stencil(ps, center, base.size());
      auto key = sorted_copy(c.stencil.indices);
      if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
      seen.push_back(std::move(key));
      c.shift = make_point(r * v[0], d > 1 ? r * v[1] : 0.0);
      c.shift_length = r;
      c.dist_to_boundary = candidate_distance(ps, c.stencil, z);
      if (!admissible(c, cfg.c, base_dist, cfg.guard_fraction)) continue;
      out.push_back(std::move(c));
    }
  }
  return out;
}

StencilEstimator dense_estimator(const PointSet& ps, std::span<const double> values, const MGrid& grid,
                                 const EpsPolicy& eps, const ClassifyThresholds& th,
                                 const FactorOptions& opt) {
  return [&ps, values, grid, eps, th, opt](const Stencil& st) {
    return classify(compute_profile(ps, st, values, grid, eps, opt), th);
  };
}

StencilEstimator two_point_estimator(const PointSet& ps, std::span<const double> values,
                                     const SweepConfig& cfg) {
  return [&ps, values, cfg](const Stencil& st) {
    const auto sites = gather(ps, st.indices);
    const auto y = gather(values, st.indices);
    const SweepEstimate s = two_point_estimate(sites, y, ps.dim(), cfg);
    return sweep_to_estimate(s, st.q, st.size(), ps.dim(), cfg);
  };
}

namespace {

RegularityEstimate pick(const RefineResult& r, const ShiftConfig& cfg, std::size_t* chosen) {
  const double base_dist = r.candidates.front().dist_to_boundary;
  std::size_t best = 0;
  for (std::size_t i = 1; i < r.candidates.size(); ++i) {
    if (!r.candidate_estimates[i]) continue;
    if (!admissible(r.candidates[i], cfg.c, base_dist, cfg.guard_fraction)) continue;
    const double s = r.candidate_estimates[i]->s_tilde;
    const double sb = r.candidate_estimates[best]->s_tilde;
    if (s > sb || (s == sb && r.candidates[i].shift_length < r.candidates[best].shift_length)) best = i;
  }
  if (chosen) *chosen = best;
  return *r.candidate_estimates[best];
}

}  // namespace

RefineResult refine_estimate(const PointSet& ps, const Point& z, const Stencil& base,
                             const RegularityEstimate& base_estimate, double m_max,
                             const StencilEstimator& estimator, const ShiftConfig& cfg) {
  RefineResult r;
  r.estimate = base_estimate;
  if (base_estimate.s_tilde >= m_max) {
    Candidate b;
    b.stencil = base;
    b.is_base = true;
    r.candidates.push_back(std::move(b));
    r.candidate_estimates.emplace_back(base_estimate);
    return r;
  }
  r.refined = true;
  r.candidates = candidate_neighborhoods(ps, z, base, cfg);
  r.candidate_estimates.resize(r.candidates.size());
  r.candidate_estimates[0] = base_estimate;
  for (std::size_t i = 1; i < r.candidates.size(); ++i) {
    try {
      r.candidate_estimates[i] = estimator(r.candidates[i].stencil);
    } catch (const Error&) {
      // The candidate drops out; the others still compete.
    }
  }
  r.estimate = pick(r, cfg, &r.chosen);
  return r;
}

RegularityEstimate select_admissible(const RefineResult& r, const ShiftConfig& cfg, std::size_t* chosen) {
  return pick(r, cfg, chosen);
}

}  // namespace regs
