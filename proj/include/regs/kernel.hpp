#pragma once

// Whittle-Matern kernels Phi_m(x, y) = psi_nu(eps |x - y|), psi_nu(t) = t^nu K_nu(t),
// nu = m - d/2. The native space of Phi_m is norm-equivalent to H^m(R^d).

#include <cstddef>
#include <span>
#include <vector>

#include "regs/dense.hpp"
#include "regs/point.hpp"

namespace regs {

struct KernelSpec {
  double m = 1.5;
  double eps = 1.0;
  int d = 1;

  double nu() const { return m - 0.5 * d; }
  // Throws InvalidSpecError unless m > d/2, eps > 0 and 1 <= d <= 3.
  void validate() const;
};

struct InterpolantCoefficients {
  KernelSpec spec;
  std::vector<Point> sites;
  std::vector<double> alpha;
};

double kernel_eval(const KernelSpec& spec, double r);

// Symmetric n x n kernel matrix. Throws DuplicateSiteError when two sites are
// closer than 1e-14 times the largest pairwise distance.
Matrix kernel_matrix(const KernelSpec& spec, std::span<const Point> sites);

Cholesky factor_kernel_matrix(const KernelSpec& spec, std::span<const Point> sites,
                              const FactorOptions& opt = {});

InterpolantCoefficients solve_interpolant(const KernelSpec& spec, std::span<const Point> sites,
                                          std::span<const double> values,
                                          const FactorOptions& opt = {});

// sqrt(Y^T Phi^{-1} Y) through the Cholesky factor.
double native_norm(const KernelSpec& spec, std::span<const Point> sites,
                   std::span<const double> values, const FactorOptions& opt = {});

double evaluate_interpolant(const InterpolantCoefficients& coeffs, const Point& x);

struct EigenOptions {
  double tol = 1e-6;
  int max_iter = 500;
};

// Smallest eigenvalue of the kernel matrix by inverse power iteration on the
// Cholesky factor. Throws ConvergenceError after max_iter sweeps.
double lambda_min(const KernelSpec& spec, std::span<const Point> sites,
                  const EigenOptions& eig = {}, const FactorOptions& opt = {});

double lambda_min(const Cholesky& chol, const EigenOptions& eig = {});

}  // namespace regs
