#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "regs/geometry.hpp"
#include "regs/profile.hpp"
#include "regs/sweep.hpp"

namespace regs {

enum class OffsetUnit { q, rho };

struct ShiftConfig {
  // Trial shift lengths, in units of the base stencil's q (or rho), each
  // capped at rho.
  std::vector<double> offsets{0.5, 1.0, 1.5};
  OffsetUnit unit = OffsetUnit::q;
  // Admissibility: dist(z, boundary of the candidate hull) >= c * q_candidate.
  double c = 0.0;
  // Reject candidates whose boundary distance falls below this fraction of
  // the base stencil's; a non-positive value disables the guard.
  double guard_fraction = 0.5;
  std::size_t max_candidates = 64;

  // One- and two-spacing buffers for first and second derivatives.
  static double safety_for_order(int order) { return order <= 0 ? 0.0 : order == 1 ? 1.0 : 2.0; }
};

struct Candidate {
  Stencil stencil;  // stencil.z is the shifted center
  Point shift{};    // r * v
  double shift_length = 0.0;
  // Signed distance from the evaluation point to the candidate hull boundary.
  double dist_to_boundary = 0.0;
  bool is_base = false;
};

// Base stencil first, then shifted candidates in direction-major, offset-
// ascending order, deduplicated by index set. Candidates failing the interior
// condition or the overestimation guard are dropped.
std::vector<Candidate> candidate_neighborhoods(const PointSet& ps, const Point& z, const Stencil& base,
                                               const ShiftConfig& cfg);

using StencilEstimator = std::function<RegularityEstimate(const Stencil&)>;

StencilEstimator dense_estimator(const PointSet& ps, std::span<const double> values, const MGrid& grid,
                                 const EpsPolicy& eps, const ClassifyThresholds& th = {},
                                 const FactorOptions& opt = {});

// Two-point secant estimates mapped onto RegularityEstimate.
StencilEstimator two_point_estimator(const PointSet& ps, std::span<const double> values,
                                     const SweepConfig& cfg);

struct RefineResult {
  RegularityEstimate estimate;
  std::size_t chosen = 0;  // index into candidates; 0 is the base
  std::vector<Candidate> candidates;
  std::vector<std::optional<RegularityEstimate>> candidate_estimates;
  bool refined = false;  // false when the base was already at m_max
};

// Max of s-tilde over the admissible candidates, ties going to the candidate
// whose center is nearest z. A base estimate at m_max is returned unchanged.
// A candidate whose estimator throws is skipped.
RefineResult refine_estimate(const PointSet& ps, const Point& z, const Stencil& base,
                             const RegularityEstimate& base_estimate, double m_max,
                             const StencilEstimator& estimator, const ShiftConfig& cfg);

// Re-selects from an evaluated result under a stricter configuration (larger
// c); candidates that were never evaluated stay excluded. The index of the
// winning candidate goes to `chosen` when given.
RegularityEstimate select_admissible(const RefineResult& r, const ShiftConfig& cfg, std::size_t* chosen = nullptr);

}  // namespace regs
