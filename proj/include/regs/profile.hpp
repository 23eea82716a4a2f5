#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regs/dense.hpp"
#include "regs/geometry.hpp"
#include "regs/kernel.hpp"

namespace regs {

struct MGrid {
  double m_min = 0.6;
  double m_max = 3.5;
  double step = 0.025;
  std::vector<double> values;

  // Uniform grid from m_min up to m_max (inclusive within step/1e6).
  static MGrid make(double m_min, double m_max, double step);
  // "a:b:c" as min:max:step.
  static MGrid parse(const std::string& text);
  // [0.6, 3.5] step 0.025 for d = 1, [1.1, 5.0] step 0.05 otherwise.
  static MGrid default_for(int d);

  std::size_t size() const { return values.size(); }
};

enum class EpsRule { constant, m, inverse_m };

struct EpsPolicy {
  EpsRule rule = EpsRule::constant;
  double eps = 1.0;

  double at(double m) const;
  static EpsPolicy parse(const std::string& text, double eps);
};

struct Normalized {
  std::vector<double> y;
  double factor = 0.0;  // RMS of the input; 0 flags all-zero data
};

Normalized normalize_data(std::span<const double> y);

struct NormProfile {
  MGrid grid;
  std::vector<double> eta;
  // Orders whose factorization failed; their eta entry is NaN.
  std::vector<bool> saturated;
  double q = 0.0;
  double normalization = 0.0;
  std::size_t n = 0;
  int d = 1;

  bool zero_data() const { return normalization == 0.0; }
  std::size_t saturated_count() const;
};

NormProfile compute_profile(std::span<const Point> sites, std::span<const double> y, int d,
                            const MGrid& grid, const EpsPolicy& eps,
                            const FactorOptions& opt = {});

NormProfile compute_profile(const PointSet& ps, const Stencil& st, std::span<const double> values,
                            const MGrid& grid, const EpsPolicy& eps,
                            const FactorOptions& opt = {});

struct ElbowResult {
  double m_star = 0.0;
  std::size_t index = 0;
  // Same length as the grid; NaN where the curvature is not eligible.
  std::vector<double> curvature;
};

// Maximum discrete curvature of g = ln eta. Saturated orders and the first
// and last two orders of every unsaturated run are not eligible.
ElbowResult elbow(const NormProfile& profile);

struct ClassifyThresholds {
  double r2_min = 0.98;
  double worst_fraction = 0.7;
  double smooth_fraction = 0.4;
  double elbow_contrast = 3.0;
  double max_saturated = 0.2;
};

enum class RegularityCase { elbow, worst_case, smooth };

std::string to_string(RegularityCase c);
RegularityCase parse_case(const std::string& s);

struct SlopeStats {
  double fit_slope = 0.0;
  double r2 = 0.0;
  double pre = 0.0;
  double post = 0.0;
  double rho_ref = 0.0;
};

struct RegularityEstimate {
  RegularityCase kind = RegularityCase::smooth;
  double s_tilde = 0.0;
  std::optional<double> m_star;
  SlopeStats slopes;
  bool reliable = true;
  double q = 0.0;
  std::size_t n = 0;
};

// ln(pi / (2 q)): growth per unit order of the worst-case bound.
double reference_rate(double q);

RegularityEstimate classify(const NormProfile& profile, const ClassifyThresholds& th = {});

// Least-squares line through (x, y); returns slope and R^2.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

std::string profile_csv(const NormProfile& profile);

}  // namespace regs
