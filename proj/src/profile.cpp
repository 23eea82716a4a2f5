#include "regs/profile.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "regs/errors.hpp"

namespace regs {

MGrid MGrid::make(double m_min, double m_max, double step) {
  if (!(step > 0.0) || !(m_max >= m_min) || !std::isfinite(m_min) || !std::isfinite(m_max)) {
    throw InvalidSpecError("order grid needs m_min <= m_max and step > 0");
  }
  MGrid g;
  g.m_min = m_min;
  g.step = step;
  const auto count = static_cast<std::size_t>(std::floor((m_max - m_min) / step + 1e-6)) + 1;
  g.values.resize(count);
  // Indexed rather than accumulated so every node is m_min + k * step exactly once rounded.
  for (std::size_t k = 0; k < count; ++k) g.values[k] = m_min + static_cast<double>(k) * step;
  g.m_max = g.values.back();
  return g;
}

MGrid MGrid::parse(const std::string& text) {
  double a = 0, b = 0, c = 0;
  char s1 = 0, s2 = 0;
  std::istringstream in(text);
  if (!(in >> a >> s1 >> b >> s2 >> c) || s1 != ':' || s2 != ':' || !(in >> std::ws).eof()) {
    throw InvalidSpecError("grid must be given as min:max:step, got '" + text + "'");
  }
  return make(a, b, c);
}

MGrid MGrid::default_for(int d) { return d == 1 ? make(0.6, 3.5, 0.025) : make(1.1, 5.0, 0.05); }

double EpsPolicy::at(double m) const {
  switch (rule) {
    case EpsRule::constant: return eps;
    case EpsRule::m: return m;
    case EpsRule::inverse_m: return 1.0 / m;
  }
  return eps;
}

EpsPolicy EpsPolicy::parse(const std::string& text, double eps) {
  if (text == "constant") return {EpsRule::constant, eps};
  if (text == "m") return {EpsRule::m, eps};
  if (text == "1/m" || text == "inverse_m") return {EpsRule::inverse_m, eps};
  throw InvalidSpecError("eps rule must be constant, m or 1/m, got '" + text + "'");
}

Normalized normalize_data(std::span<const double> y) {
  if (y.empty()) throw DomainError("normalize_data: empty data");
  double ss = 0.0;
  for (double v : y) ss += v * v;
  Normalized out;
  out.y.assign(y.begin(), y.end());
  if (ss == 0.0) return out;
  out.factor = std::sqrt(ss / static_cast<double>(y.size()));
  for (double& v : out.y) v /= out.factor;
  return out;
}

std::size_t NormProfile::saturated_count() const {
  std::size_t c = 0;
  for (bool s : saturated) c += s ? 1 : 0;
  return c;
}

NormProfile compute_profile(std::span<const Point> sites, std::span<const double> y, int d,
                            const MGrid& grid, const EpsPolicy& eps, const FactorOptions& opt) {
  if (sites.size() != y.size()) throw DomainError("compute_profile: size mismatch");
  if (grid.values.empty()) throw InvalidSpecError("empty order grid");
  if (!(grid.m_min > 0.5 * d)) throw InvalidSpecError("order grid must start above d/2");

  NormProfile p;
  p.grid = grid;
  p.n = sites.size();
  p.d = d;
  p.q = sites.size() >= 2 ? separation_distance(sites) : 0.0;
  const Normalized nz = normalize_data(y);
  p.normalization = nz.factor;
  p.eta.assign(grid.size(), 0.0);
  p.saturated.assign(grid.size(), false);
  if (nz.factor == 0.0) return p;

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double m = grid.values[k];
    const KernelSpec spec{m, eps.at(m), d};
    try {
      p.eta[k] = native_norm(spec, sites, nz.y, opt);
    } catch (const FactorizationError&) {
      p.eta[k] = std::numeric_limits<double>::quiet_NaN();
      p.saturated[k] = true;
    }
  }
  return p;
}

NormProfile compute_profile(const PointSet& ps, const Stencil& st, std::span<const double> values,
                            const MGrid& grid, const EpsPolicy& eps, const FactorOptions& opt) {
  const auto sites = gather(ps, st.indices);
  const auto y = gather(values, st.indices);
  NormProfile p = compute_profile(sites, y, ps.dim(), grid, eps, opt);
  return p;
}

namespace {

bool usable(const NormProfile& p, std::size_t k) {
  return !p.saturated[k] && std::isfinite(p.eta[k]) && p.eta[k] > 0.0;
}

}  // namespace

ElbowResult elbow(const NormProfile& p) {
  const std::size_t N = p.grid.size();
  if (N < 5) throw InsufficientPointsError("elbow needs at least five orders");
  const double h = p.grid.step;
  ElbowResult r;
  r.curvature.assign(N, std::numeric_limits<double>::quiet_NaN());
  bool found = false;
  double best = -1.0;
  for (std::size_t i = 2; i + 2 < N; ++i) {
    bool ok = true;
    for (std::size_t j = i - 2; j <= i + 2; ++j) ok = ok && usable(p, j);
    if (!ok) continue;
    const double gm = std::log(p.eta[i - 1]);
    const double g0 = std::log(p.eta[i]);
    const double gp = std::log(p.eta[i + 1]);
    const double g1 = (gp - gm) / (2.0 * h);
    const double g2 = (gp - 2.0 * g0 + gm) / (h * h);
    const double kappa = std::fabs(g2) / std::pow(1.0 + g1 * g1, 1.5);
    r.curvature[i] = kappa;
    if (kappa > best) {
      best = kappa;
      r.index = i;
      found = true;
    }
  }
  if (!found) throw InsufficientPointsError("no order has a complete curvature stencil");
  r.m_star = p.grid.values[r.index];
  return r;
}

std::string to_string(RegularityCase c) {
  switch (c) {
    case RegularityCase::elbow: return "elbow";
    case RegularityCase::worst_case: return "worst_case";
    case RegularityCase::smooth: return "smooth";
  }
  return "smooth";
}

RegularityCase parse_case(const std::string& s) {
  if (s == "elbow") return RegularityCase::elbow;
  if (s == "worst_case") return RegularityCase::worst_case;
  if (s == "smooth") return RegularityCase::smooth;
  throw InvalidSpecError("unknown regularity case '" + s + "'");
}

double reference_rate(double q) { return std::log(std::numbers::pi / (2.0 * q)); }

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  LineFit f;
  const std::size_t n = x.size();
  if (n == 0) return f;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

namespace {

LineFit fit_range(const NormProfile& p, double lo, double hi) {
  std::vector<double> xs, ys;
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    const double m = p.grid.values[k];
    if (m < lo || m > hi || !usable(p, k)) continue;
    xs.push_back(m);
    ys.push_back(std::log(p.eta[k]));
  }
  return fit_line(xs, ys);
}

}  // namespace

RegularityEstimate classify(const NormProfile& p, const ClassifyThresholds& th) {
  RegularityEstimate e;
  e.q = p.q;
  e.n = p.n;
  const double m_min = p.grid.m_min;
  const double m_max = p.grid.m_max;
  e.slopes.rho_ref = p.q > 0.0 ? reference_rate(p.q) : 0.0;
  const double rho = e.slopes.rho_ref;

  if (p.zero_data()) {
    e.kind = RegularityCase::smooth;
    e.s_tilde = m_max;
    return e;
  }

  const std::size_t sat = p.saturated_count();
  if (static_cast<double>(sat) > th.max_saturated * static_cast<double>(p.grid.size())) e.reliable = false;

  const LineFit all = fit_range(p, m_min, m_max);
  e.slopes.fit_slope = all.slope;
  e.slopes.r2 = all.r2;

  auto by_slope = [&](double slope) {
    const double mid = 0.5 * (th.worst_fraction + th.smooth_fraction) * rho;
    if (slope >= mid) {
      e.kind = RegularityCase::worst_case;
      e.s_tilde = m_min;
    } else {
      e.kind = RegularityCase::smooth;
      e.s_tilde = m_max;
    }
  };

  if (p.grid.size() - sat < 2) {
    e.reliable = false;
    by_slope(0.0);
    return e;
  }
  if (all.r2 >= th.r2_min && all.slope >= th.worst_fraction * rho) {
    e.kind = RegularityCase::worst_case;
    e.s_tilde = m_min;
    return e;
  }
  if (all.r2 >= th.r2_min && all.slope <= th.smooth_fraction * rho) {
    e.kind = RegularityCase::smooth;
    e.s_tilde = m_max;
    return e;
  }

  ElbowResult el;
  try {
    el = elbow(p);
  } catch (const InsufficientPointsError&) {
    e.reliable = false;
    by_slope(all.slope);
    return e;
  }
  const LineFit pre = fit_range(p, m_min, el.m_star);
  const LineFit post = fit_range(p, el.m_star, m_max);
  e.slopes.pre = pre.slope;
  e.slopes.post = post.slope;
  const bool interior = el.m_star > m_min && el.m_star < m_max;
  if (interior && post.slope > 0.0 && post.slope >= th.elbow_contrast * pre.slope) {
    e.kind = RegularityCase::elbow;
    e.s_tilde = el.m_star;
    e.m_star = el.m_star;
    return e;
  }
  by_slope(all.slope);
  return e;
}

std::string profile_csv(const NormProfile& p) {
  std::string out = "m,eta,log_eta\n";
  for (std::size_t k = 0; k < p.grid.size(); ++k) {
    out += format_double(p.grid.values[k]);
    out += ',';
    if (p.saturated[k]) {
      out += "nan,nan\n";
      continue;
    }
    out += format_double(p.eta[k]);
    out += ',';
    out += p.eta[k] > 0.0 ? format_double(std::log(p.eta[k])) : std::string("-inf");
    out += '\n';
  }
  return out;
}

}  // namespace regs
