#include "regs/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "regs/errors.hpp"
#include "regs/kernel.hpp"
#include "regs/parallel.hpp"

namespace regs {

void SweepConfig::validate(int d) const {
  if (!(delta > 0.0)) throw InvalidSpecError("sweep delta must be positive");
  if (!(m_max - delta > 0.5 * d)) throw InvalidSpecError("sweep needs m_max - delta > d/2");
  if (!(iqr_k >= 0.0)) throw InvalidSpecError("IQR multiplier must be non-negative");
}

double eta_at(std::span<const Point> sites, std::span<const double> y_normalized, int d, double m,
              const EpsPolicy& eps, const FactorOptions& opt) {
  return native_norm(KernelSpec{m, eps.at(m), d}, sites, y_normalized, opt);
}

SweepEstimate two_point_from_norms(double eta1, double eta2, double q, int d, const SweepConfig& cfg) {
  SweepEstimate s;
  s.eta1 = eta1;
  s.eta2 = eta2;
  s.rho_ref = reference_rate(q);
  const double l1 = std::log(eta1);
  const double l2 = std::log(eta2);
  s.slope = (l2 - l1) / cfg.delta;
  if (s.slope < cfg.smooth_fraction * s.rho_ref) {
    s.smooth = true;
    return s;
  }
  if (!(s.slope > 0.0)) {
    // Only reachable when the reference rate itself is not positive.
    s.reliable = false;
    return s;
  }
  const double floor = 0.5 * d + cfg.floor_margin;
  s.m_hat = std::max(floor, cfg.m_max - l2 / s.slope);
  return s;
}

SweepEstimate two_point_estimate(std::span<const Point> sites, std::span<const double> y, int d,
                                 const SweepConfig& cfg) {
  cfg.validate(d);
  const Normalized nz = normalize_data(y);
  const double q = separation_distance(sites);
  if (nz.factor == 0.0) {
    SweepEstimate s;
    s.smooth = true;
    s.rho_ref = reference_rate(q);
    return s;
  }
  const double e1 = eta_at(sites, nz.y, d, cfg.m_max - cfg.delta, cfg.eps, cfg.factor);
  const double e2 = eta_at(sites, nz.y, d, cfg.m_max, cfg.eps, cfg.factor);
  return two_point_from_norms(e1, e2, q, d, cfg);
}

double quantile(std::vector<double> v, double p) {
  if (v.empty()) throw InsufficientPointsError("quantile of an empty sample");
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] + frac * (v[hi] - v[lo]);
}

std::vector<std::size_t> global_screen(std::span<const double> log_eta_max, double iqr_k) {
  std::vector<double> finite;
  for (double v : log_eta_max) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  std::vector<std::size_t> out;
  if (finite.size() < 4) return out;
  const double q1 = quantile(finite, 0.25);
  const double q3 = quantile(finite, 0.75);
  const double fence = q3 + iqr_k * (q3 - q1);
  for (std::size_t i = 0; i < log_eta_max.size(); ++i) {
    if (log_eta_max[i] > fence) out.push_back(i);
  }
  return out;
}

RegularityEstimate sweep_to_estimate(const SweepEstimate& s, double q, std::size_t n, int d,
                              const SweepConfig& cfg) {
  RegularityEstimate e;
  e.q = q;
  e.n = n;
  e.slopes.rho_ref = s.rho_ref;
  e.slopes.fit_slope = s.slope;
  e.reliable = s.reliable;
  const double floor = 0.5 * d + cfg.floor_margin;
  if (s.smooth || !s.m_hat) {
    e.kind = RegularityCase::smooth;
    e.s_tilde = cfg.m_max;
  } else if (*s.m_hat <= floor) {
    e.kind = RegularityCase::worst_case;
    e.s_tilde = floor;
  } else {
    e.kind = RegularityCase::elbow;
    e.s_tilde = *s.m_hat;
    e.m_star = *s.m_hat;
  }
  return e;
}

std::string to_string(MapMethod m) {
  switch (m) {
    case MapMethod::dense: return "dense";
    case MapMethod::two_point: return "two_point";
    case MapMethod::screened: return "screened";
  }
  return "dense";
}

MapMethod parse_method(const std::string& s) {
  if (s == "dense") return MapMethod::dense;
  if (s == "two_point") return MapMethod::two_point;
  if (s == "screened") return MapMethod::screened;
  throw InvalidSpecError("map method must be dense, two_point or screened, got '" + s + "'");
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct LocalData {
  std::vector<Point> sites;
  Normalized y;
  double q = 0.0;
};

LocalData local_data(const PointSet& ps, std::span<const double> values, const Point& z, std::size_t n) {
  const Stencil st = knn_stencil(ps, z, n);
  LocalData ld;
  ld.sites = gather(ps, st.indices);
  ld.y = normalize_data(gather(values, st.indices));
  ld.q = st.q;
  return ld;
}

void fail(MapPoint& mp, const std::exception& ex) {
  mp.status = PointStatus::failed;
  mp.error = ex.what();
  mp.estimate.reliable = false;
}

}  // namespace

RegularityMap dense_map(const PointSet& ps, std::span<const double> values,
                        std::span<const Point> eval_points, const MapOptions& opt) {
  RegularityMap map;
  map.method = MapMethod::dense;
  map.points.resize(eval_points.size());
  std::atomic<std::size_t> solves{0};
  parallel_for(eval_points.size(), resolve_threads(opt.threads), [&](std::size_t i) {
    MapPoint& mp = map.points[i];
    mp.z = eval_points[i];
    mp.log_eta_max = kNaN;
    try {
      const Stencil st = knn_stencil(ps, eval_points[i], opt.n);
      const NormProfile p = compute_profile(ps, st, values, opt.grid, opt.sweep.eps, opt.sweep.factor);
      if (!p.zero_data()) solves += p.grid.size();
      mp.estimate = classify(p, opt.thresholds);
      if (!p.saturated.back() && p.eta.back() > 0.0) mp.log_eta_max = std::log(p.eta.back());
    } catch (const Error& ex) {
      fail(mp, ex);
    }
  });
  map.solves = solves.load();
  return map;
}

RegularityMap sweep_map(const PointSet& ps, std::span<const double> values,
                        std::span<const Point> eval_points, const MapOptions& opt, bool screen) {
  const int d = ps.dim();
  const SweepConfig& cfg = opt.sweep;
  cfg.validate(d);
  RegularityMap map;
  map.method = screen ? MapMethod::screened : MapMethod::two_point;
  const std::size_t N = eval_points.size();
  map.points.resize(N);
  std::atomic<std::size_t> solves{0};
  const unsigned threads = resolve_threads(opt.threads);

  auto two_point = [&](std::size_t i) {
    MapPoint& mp = map.points[i];
    try {
      const LocalData ld = local_data(ps, values, eval_points[i], opt.n);
      if (ld.y.factor == 0.0) {
        SweepEstimate s;
        s.smooth = true;
        s.rho_ref = reference_rate(ld.q);
        mp.sweep = s;
      } else {
        solves += 2;
        const double e1 = eta_at(ld.sites, ld.y.y, d, cfg.m_max - cfg.delta, cfg.eps, cfg.factor);
        const double e2 = eta_at(ld.sites, ld.y.y, d, cfg.m_max, cfg.eps, cfg.factor);
        mp.sweep = two_point_from_norms(e1, e2, ld.q, d, cfg);
        mp.log_eta_max = std::log(e2);
      }
      mp.estimate = sweep_to_estimate(*mp.sweep, ld.q, opt.n, d, cfg);
      mp.status = PointStatus::ok;
      mp.error.clear();
    } catch (const Error& ex) {
      fail(mp, ex);
    }
  };

  if (!screen) {
    parallel_for(N, threads, [&](std::size_t i) {
      map.points[i].z = eval_points[i];
      map.points[i].log_eta_max = kNaN;
      two_point(i);
    });
    map.solves = solves.load();
    return map;
  }

  // One order per point, then the IQR fence, then two orders on outliers.
  std::vector<double> log_eta(N, kNaN);
  parallel_for(N, threads, [&](std::size_t i) {
    MapPoint& mp = map.points[i];
    mp.z = eval_points[i];
    mp.log_eta_max = kNaN;
    try {
      const LocalData ld = local_data(ps, values, eval_points[i], opt.n);
      double l = -std::numeric_limits<double>::infinity();
      if (ld.y.factor != 0.0) {
        solves += 1;
        l = std::log(eta_at(ld.sites, ld.y.y, d, cfg.m_max, cfg.eps, cfg.factor));
      }
      log_eta[i] = l;
      mp.log_eta_max = l;
      SweepEstimate s;
      s.smooth = true;
      s.rho_ref = reference_rate(ld.q);
      mp.sweep = s;
      mp.estimate = sweep_to_estimate(s, ld.q, opt.n, d, cfg);
    } catch (const Error& ex) {
      fail(mp, ex);
    }
  });
  map.outliers = global_screen(log_eta, cfg.iqr_k);
  parallel_for(map.outliers.size(), threads, [&](std::size_t k) { two_point(map.outliers[k]); });
  map.solves = solves.load();
  return map;
}

RegularityMap regularity_map(MapMethod method, const PointSet& ps, std::span<const double> values,
                             std::span<const Point> eval_points, const MapOptions& opt) {
  switch (method) {
    case MapMethod::dense: return dense_map(ps, values, eval_points, opt);
    case MapMethod::two_point: return sweep_map(ps, values, eval_points, opt, false);
    case MapMethod::screened: return sweep_map(ps, values, eval_points, opt, true);
  }
  return dense_map(ps, values, eval_points, opt);
}

}  // namespace regs
