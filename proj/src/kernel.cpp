#include "regs/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regs/errors.hpp"
#include "regs/simd.hpp"
#include "regs/special.hpp"

namespace regs {

void KernelSpec::validate() const {
  if (d < 1 || d > 3) throw InvalidSpecError("kernel dimension must be 1, 2 or 3");
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidSpecError("shape parameter must be positive");
  if (!(m > 0.5 * d) || !std::isfinite(m)) {
    throw InvalidSpecError("smoothness order m=" + std::to_string(m) + " must exceed d/2");
  }
}

double kernel_eval(const KernelSpec& spec, double r) {
  spec.validate();
  if (r < 0.0) throw DomainError("kernel_eval: negative radius");
  return special::matern_radial(spec.nu(), spec.eps * r);
}

Matrix kernel_matrix(const KernelSpec& spec, std::span<const Point> sites) {
  spec.validate();
  const std::size_t n = sites.size();
  Matrix a(n);
  if (n == 0) return a;

  std::vector<double> dist(n * n, 0.0);
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      const double r = distance(sites[i], sites[j]);
      dist[i * n + j] = r;
      scale = std::max(scale, r);
    }
  }
  const double tol = 1e-14 * scale;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (dist[i * n + j] <= tol) throw DuplicateSiteError(j, i);
    }
  }

  const double nu = spec.nu();
  const double diag = special::matern_radial(nu, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    a(i, i) = diag;
    for (std::size_t j = 0; j < i; ++j) {
      const double v = special::matern_radial(nu, spec.eps * dist[i * n + j]);
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

Cholesky factor_kernel_matrix(const KernelSpec& spec, std::span<const Point> sites,
                              const FactorOptions& opt) {
  return Cholesky::factor(kernel_matrix(spec, sites), opt);
}

InterpolantCoefficients solve_interpolant(const KernelSpec& spec, std::span<const Point> sites,
                                          std::span<const double> values,
                                          const FactorOptions& opt) {
  if (values.size() != sites.size()) throw DomainError("solve_interpolant: size mismatch");
  const Cholesky chol = factor_kernel_matrix(spec, sites, opt);
  InterpolantCoefficients c;
  c.spec = spec;
  c.sites.assign(sites.begin(), sites.end());
  c.alpha = chol.solve(values);
  return c;
}

double native_norm(const KernelSpec& spec, std::span<const Point> sites,
                   std::span<const double> values, const FactorOptions& opt) {
  if (values.size() != sites.size()) throw DomainError("native_norm: size mismatch");
  const Cholesky chol = factor_kernel_matrix(spec, sites, opt);
  return std::sqrt(chol.inverse_quadratic(values));
}

double evaluate_interpolant(const InterpolantCoefficients& coeffs, const Point& x) {
  const double nu = coeffs.spec.nu();
  double s = 0.0;
  for (std::size_t j = 0; j < coeffs.sites.size(); ++j) {
    s += coeffs.alpha[j] * special::matern_radial(nu, coeffs.spec.eps * distance(x, coeffs.sites[j]));
  }
  return s;
}

double lambda_min(const Cholesky& chol, const EigenOptions& eig) {
  const std::size_t n = chol.size();
  if (n == 0) throw DomainError("lambda_min: empty matrix");
  if (n == 1) {
    const double l = chol.lower()(0, 0);
    return l * l;
  }
  const auto& k = simd::active();

  // Deterministic start with components in every eigendirection a priori.
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = 1.0 + 0.37 * static_cast<double>(i) / static_cast<double>(n) * ((i % 2) ? -1.0 : 1.0);
  }
  double nx = std::sqrt(k.dot(x.data(), x.data(), n));
  for (double& v : x) v /= nx;

  double prev = 0.0;
  for (int it = 0; it < eig.max_iter; ++it) {
    std::vector<double> y = chol.solve(x);
    const double ny = std::sqrt(k.dot(y.data(), y.data(), n));
    // Rayleigh quotient of A^{-1} at x: x^T A^{-1} x, and |A^{-1}x| -> 1/lambda_min.
    const double rq = k.dot(x.data(), y.data(), n);
    const double est = 1.0 / rq;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / ny;
    if (it > 0 && std::fabs(est - prev) <= eig.tol * std::fabs(est)) return est;
    prev = est;
  }
  throw ConvergenceError("lambda_min: inverse iteration did not converge");
}

double lambda_min(const KernelSpec& spec, std::span<const Point> sites, const EigenOptions& eig,
                  const FactorOptions& opt) {
  return lambda_min(factor_kernel_matrix(spec, sites, opt), eig);
}

}  // namespace regs
