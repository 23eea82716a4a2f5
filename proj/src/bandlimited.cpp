#include "regs/bandlimited.hpp"

#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <utility>

#include "regs/geometry.hpp"

namespace regs {

void BandlimitSpec::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidSpecError("bandwidth sigma must be positive");
  if (!(t >= 0.0) || !std::isfinite(t)) throw InvalidSpecError("Sobolev order t must be non-negative");
  if (quad_nodes < 64) throw InvalidSpecError("at least 64 quadrature nodes are required");
}

std::shared_ptr<const QuadratureRule> QuadratureRule::gauss_legendre(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  gsl_integration_glfixed_table* table = gsl_integration_glfixed_table_alloc(n);
  if (!table) throw InvalidSpecError("cannot build a Gauss-Legendre rule with " + std::to_string(n) + " nodes");
  auto rule = std::make_shared<QuadratureRule>();
  rule->nodes.resize(n);
  rule->weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    gsl_integration_glfixed_point(-1.0, 1.0, i, &rule->nodes[i], &rule->weights[i], table);
  }
  gsl_integration_glfixed_table_free(table);
  cache.emplace(n, rule);
  return rule;
}

double QuadratureRule::integrate(double a, double b, const std::function<double(double)>& f) const {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return half * sum;
}

double BandSpectrum::shell(double theta, double t) const {
  const double lo = std::clamp(theta, 0.0, 1.0) * sigma;
  double total = 0.0;
  if (density && lo < sigma) {
    total += rule->integrate(lo, sigma, [&](double w) { return std::pow(1.0 + w * w, t) * density(w); }) /
             std::numbers::pi;
  }
  for (const SpectralAtom& a : atoms) {
    if (a.omega >= lo && a.omega <= sigma) total += std::pow(1.0 + a.omega * a.omega, t) * a.mass;
  }
  return total;
}

double BandSpectrum::norm_sq(double t) const { return shell(0.0, t); }

double BandlimitedInterpolant::operator()(double x) const {
  double s = 0.0;
  for (std::size_t j = 0; j < sites.size(); ++j) s += alpha[j] * truncated_kernel(spec, x - sites[j]);
  return s;
}

double BandlimitedInterpolant::spectrum(double w) const {
  if (std::fabs(w) > spec.sigma) return 0.0;
  double c = 0.0, s = 0.0;
  for (std::size_t j = 0; j < sites.size(); ++j) {
    c += alpha[j] * std::cos(w * sites[j]);
    s += alpha[j] * std::sin(w * sites[j]);
  }
  return std::pow(1.0 + w * w, -2.0 * spec.t) * (c * c + s * s);
}

BandSpectrum BandlimitedInterpolant::measure() const {
  BandSpectrum b;
  b.sigma = spec.sigma;
  b.rule = QuadratureRule::gauss_legendre(spec.quad_nodes);
  b.density = [f = *this](double w) { return f.spectrum(w); };
  return b;
}

double BandlimitedInterpolant::sobolev_norm(double t) const { return std::sqrt(measure().norm_sq(t)); }

double truncated_kernel(const BandlimitSpec& spec, double r) {
  spec.validate();
  const auto rule = QuadratureRule::gauss_legendre(spec.quad_nodes);
  const double v = rule->integrate(0.0, spec.sigma, [&](double w) {
    return std::pow(1.0 + w * w, -spec.t) * std::cos(w * r);
  });
  return v / std::numbers::pi;
}

Matrix truncated_kernel_matrix(const BandlimitSpec& spec, std::span<const double> sites) {
  spec.validate();
  const std::size_t n = sites.size();
  const auto rule = QuadratureRule::gauss_legendre(spec.quad_nodes);
  const double half = 0.5 * spec.sigma;
  // Weighted symbol at the nodes, shared by every entry.
  std::vector<double> w(rule->nodes.size()), g(rule->nodes.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    w[k] = half + half * rule->nodes[k];
    g[k] = half * rule->weights[k] * std::pow(1.0 + w[k] * w[k], -spec.t) / std::numbers::pi;
  }
  Matrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const double r = sites[i] - sites[j];
      double s = 0.0;
      for (std::size_t k = 0; k < w.size(); ++k) s += g[k] * std::cos(w[k] * r);
      a(i, j) = s;
      a(j, i) = s;
    }
  }
  return a;
}

BandlimitedInterpolant bl_interpolate(const BandlimitSpec& spec, std::span<const double> sites,
                                      std::span<const double> values, const FactorOptions& opt) {
  spec.validate();
  if (sites.size() != values.size()) throw DomainError("bl_interpolate: size mismatch");
  if (sites.empty()) throw InsufficientPointsError("bl_interpolate: no sites");
  BandlimitedInterpolant f;
  f.spec = spec;
  f.sites.assign(sites.begin(), sites.end());
  f.alpha.assign(sites.size(), 0.0);
  if (std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; })) return f;
  try {
    const Cholesky chol = Cholesky::factor(truncated_kernel_matrix(spec, sites), opt);
    f.alpha = chol.solve(values);
  } catch (const FactorizationError& ex) {
    throw BandTooNarrowError("band-limited kernel matrix is not positive definite (sigma = " +
                             format_double(spec.sigma) + ", t = " + format_double(spec.t) + ", " + ex.what() + ")");
  }
  return f;
}

double spectral_median(const BandSpectrum& f, double t) {
  const double total = f.norm_sq(t);
  if (!(total > 0.0)) throw ZeroFunctionError("spectral median of the zero function");
  const double half = 0.5 * total;
  if (f.shell(1.0, t) >= half) return 1.0;
  double lo = 0.0, hi = 1.0;  // shell(lo) >= half > shell(hi)
  while (hi - lo > 1e-6) {
    const double mid = 0.5 * (lo + hi);
    if (f.shell(mid, t) >= half) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

double spectral_median(const BandlimitedInterpolant& f, double t) { return spectral_median(f.measure(), t); }

namespace {

// 1/4 int_a^b ln(1 + (beta_t sigma)^2) dt by the trapezoid rule.
double median_exponent(const BandSpectrum& f, double a, double b, double* beta_min, double* beta_max) {
  double lo = 1.0, hi = 0.0, integral = 0.0;
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil((b - a) / kInverseCheckStep - 1e-9)));
  const double h = (b - a) / static_cast<double>(steps);
  for (std::size_t k = 0; k <= steps; ++k) {
    const double t = k == steps ? b : a + static_cast<double>(k) * h;
    const double beta = spectral_median(f, t);
    lo = std::min(lo, beta);
    hi = std::max(hi, beta);
    const double bs = beta * f.sigma;
    integral += (k == 0 || k == steps ? 0.5 : 1.0) * h * std::log1p(bs * bs);
  }
  if (beta_min) *beta_min = lo;
  if (beta_max) *beta_max = hi;
  return 0.25 * integral;
}

}  // namespace

InverseCheck inverse_inequality_check(const BandSpectrum& f, double s, double m) {
  if (!(s > 0.0) || !(m >= s)) throw InvalidSpecError("inverse inequality needs 0 < s <= m");
  InverseCheck c;
  c.s = s;
  c.m = m;
  c.lhs = std::sqrt(f.norm_sq(m));
  const double hs = std::sqrt(f.norm_sq(s));
  double exponent = 0.0;
  if (m > s) {
    exponent = median_exponent(f, s, m, &c.beta_min, &c.beta_max);
  } else {
    c.beta_min = c.beta_max = spectral_median(f, s);
  }
  c.rhs = hs * std::exp(exponent);
  c.holds = c.lhs >= c.rhs * (1.0 - 1e-6);
  return c;
}

InverseCheck inverse_inequality_check(const BandlimitedInterpolant& f, double s, double m) {
  return inverse_inequality_check(f.measure(), s, m);
}

std::vector<InverseInstance> inverse_property_suite(std::size_t instances, std::uint64_t seed, std::size_t nodes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<InverseInstance> out;
  out.reserve(instances);
  for (std::size_t k = 0; k < instances; ++k) {
    InverseInstance in;
    in.f.spec = {2.0 + 18.0 * unit(rng), 3.0 * unit(rng), nodes};
    const auto n = 3 + static_cast<std::size_t>(17.0 * unit(rng));
    for (std::size_t j = 0; j < n; ++j) {
      in.f.sites.push_back(-1.0 + 2.0 * unit(rng));
      in.f.alpha.push_back(-1.0 + 2.0 * unit(rng));
    }
    double s = 0.6 + 4.4 * unit(rng), m = 0.6 + 4.4 * unit(rng);
    if (s > m) std::swap(s, m);
    in.check = inverse_inequality_check(in.f, s, m);
    BandlimitedInterpolant g = in.f;
    g.spec.quad_nodes = 2 * nodes;
    in.check_doubled = inverse_inequality_check(g, s, m);
    in.rel_change = std::max(std::fabs(in.check.lhs - in.check_doubled.lhs) / std::fabs(in.check_doubled.lhs),
                             std::fabs(in.check.rhs - in.check_doubled.rhs) / std::fabs(in.check_doubled.rhs));
    out.push_back(std::move(in));
  }
  return out;
}

std::vector<LowerBoundPoint> lower_bound_curve(std::span<const double> sites, std::span<const double> values,
                                               double s, const MGrid& grid, const LowerBoundOptions& opt) {
  if (sites.size() != values.size()) throw DomainError("lower_bound_curve: size mismatch");
  if (sites.size() < 2) throw InsufficientPointsError("lower_bound_curve needs at least two sites");
  if (!(opt.kappa > 0.0)) throw InvalidSpecError("kappa must be positive");
  if (!(s > 0.0)) throw InvalidSpecError("reference order s must be positive");

  std::vector<Point> pts;
  pts.reserve(sites.size());
  for (double x : sites) pts.push_back(make_point(x));
  const double q = separation_distance(pts);
  const double sigma = opt.kappa / q;
  const Normalized nz = normalize_data(values);
  const NormProfile prof = compute_profile(pts, values, 1, grid, opt.eps, opt.factor);

  std::vector<LowerBoundPoint> out(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    LowerBoundPoint& p = out[k];
    p.m = grid.values[k];
    p.s_star = std::min(s, p.m);
    p.eta = prof.saturated[k] ? std::numeric_limits<double>::quiet_NaN() : prof.eta[k];
    if (nz.factor == 0.0) continue;
    try {
      const BandlimitedInterpolant fs = bl_interpolate({sigma, p.s_star, opt.quad_nodes}, sites, nz.y, opt.factor);
      p.prefactor = fs.sobolev_norm(p.s_star);
      if (p.m > p.s_star) {
        const BandlimitedInterpolant fm = bl_interpolate({sigma, p.m, opt.quad_nodes}, sites, nz.y, opt.factor);
        p.exponent = median_exponent(fm.measure(), p.s_star, p.m, nullptr, nullptr);
      }
      p.bound = p.prefactor * std::exp(p.exponent);
    } catch (const Error& ex) {
      p.ok = false;
      p.error = ex.what();
      p.prefactor = p.exponent = p.bound = std::numeric_limits<double>::quiet_NaN();
    }
  }
  return out;
}

}  // namespace regs
