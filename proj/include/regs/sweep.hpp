#pragma once

#include <atomic>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regs/geometry.hpp"
#include "regs/profile.hpp"

namespace regs {

struct SweepConfig {
  double m_max = 3.5;
  double delta = 0.25;
  double smooth_fraction = 0.4;
  double iqr_k = 1.5;
  EpsPolicy eps;
  // m_hat is clamped below at d/2 + floor_margin. With the default of 0 a
  // fully rough tail lands exactly on d/2, which the flag rule
  // s <= |alpha| + d/2 still catches at |alpha| = 0.
  double floor_margin = 0.0;
  FactorOptions factor;

  void validate(int d) const;
};

struct SweepEstimate {
  std::optional<double> m_hat;
  bool smooth = false;
  bool reliable = true;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double slope = 0.0;
  double rho_ref = 0.0;

  // s-tilde implied by the estimate: m_max when smooth, m_hat otherwise.
  double s_tilde(double m_max) const { return smooth || !m_hat ? m_max : *m_hat; }
};

// Native norm of RMS-normalized data at a single order.
double eta_at(std::span<const Point> sites, std::span<const double> y_normalized, int d, double m,
              const EpsPolicy& eps, const FactorOptions& opt = {});

// Secant through (m_max - delta, ln eta1) and (m_max, ln eta2), continued down
// to ln eta = 0. Throws FactorizationError if either order fails.
SweepEstimate two_point_estimate(std::span<const Point> sites, std::span<const double> y, int d,
                                 const SweepConfig& cfg);

// Same, from two already computed norms.
SweepEstimate two_point_from_norms(double eta1, double eta2, double q, int d, const SweepConfig& cfg);

// smooth -> m_max; m_hat at the floor -> worst_case; otherwise an elbow at m_hat.
RegularityEstimate sweep_to_estimate(const SweepEstimate& s, double q, std::size_t n, int d,
                                     const SweepConfig& cfg);

// Linear-interpolation quantile (position p (n - 1) in the sorted sample).
double quantile(std::vector<double> v, double p);

// Indices whose value exceeds Q3 + k (Q3 - Q1). Non-finite entries take no
// part in the quartiles and are never flagged.
std::vector<std::size_t> global_screen(std::span<const double> log_eta_max, double iqr_k);

enum class MapMethod { dense, two_point, screened };
std::string to_string(MapMethod m);
MapMethod parse_method(const std::string& s);

enum class PointStatus { ok, failed };

struct MapPoint {
  Point z{};
  RegularityEstimate estimate;
  std::optional<SweepEstimate> sweep;
  double log_eta_max = 0.0;  // NaN when unavailable
  PointStatus status = PointStatus::ok;
  std::string error;
};

struct RegularityMap {
  MapMethod method = MapMethod::dense;
  std::vector<MapPoint> points;
  std::vector<std::size_t> outliers;
  // Number of kernel factorizations attempted.
  std::size_t solves = 0;
};

struct MapOptions {
  std::size_t n = 20;
  unsigned threads = 0;
  MGrid grid;  // dense method
  ClassifyThresholds thresholds;
  SweepConfig sweep;
};

// Classifies the full profile at every evaluation point.
RegularityMap dense_map(const PointSet& ps, std::span<const double> values,
                        std::span<const Point> eval_points, const MapOptions& opt);

// Two-point estimates everywhere (screen = false) or a one-order IQR screen
// followed by two-point estimates on the outliers only (screen = true).
RegularityMap sweep_map(const PointSet& ps, std::span<const double> values,
                        std::span<const Point> eval_points, const MapOptions& opt, bool screen);

RegularityMap regularity_map(MapMethod method, const PointSet& ps, std::span<const double> values,
                             std::span<const Point> eval_points, const MapOptions& opt);

}  // namespace regs
