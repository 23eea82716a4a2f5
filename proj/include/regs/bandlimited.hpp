#pragma once

// One-dimensional band-limited surrogates. A kernel with Fourier transform
// (1 + w^2)^(-t) on |w| <= sigma and zero outside reproduces the H^t norm on
// the band, so its interpolant is the minimal H^t-norm band-limited
// interpolant. Fourier convention: f(x) = (1/2pi) int fhat(w) e^{iwx} dw.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "regs/dense.hpp"
#include "regs/errors.hpp"
#include "regs/profile.hpp"

namespace regs {

class BandTooNarrowError : public Error {
 public:
  using Error::Error;
};

class ZeroFunctionError : public Error {
 public:
  using Error::Error;
};

struct BandlimitSpec {
  double sigma = 3.2;
  double t = 0.0;
  std::size_t quad_nodes = 256;

  // Throws InvalidSpecError unless sigma > 0, t >= 0 and quad_nodes >= 64.
  void validate() const;
};

// Gauss-Legendre rule on [-1, 1].
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  static std::shared_ptr<const QuadratureRule> gauss_legendre(std::size_t n);

  // int_a^b f
  double integrate(double a, double b, const std::function<double(double)>& f) const;
};

struct SpectralAtom {
  double omega = 0.0;  // |w|, the atom sits at +w and -w
  double mass = 0.0;   // contribution to |f|_{L2}^2
};

// Even spectral measure |fhat|^2 supported on [-sigma, sigma]: a density plus
// point masses. Norms: |f|_{H^t}^2 = (1/pi) int_0^sigma (1+w^2)^t g(w) dw
// + sum (1+w_k^2)^t mass_k.
struct BandSpectrum {
  double sigma = 1.0;
  std::function<double(double)> density;  // g(w) = |fhat(w)|^2, may be empty
  std::vector<SpectralAtom> atoms;
  std::shared_ptr<const QuadratureRule> rule;

  double norm_sq(double t) const;
  // Contribution of theta sigma <= |w| <= sigma to norm_sq(t).
  double shell(double theta, double t) const;
};

// Expansion f(x) = sum alpha_j Phi_{sigma,t}(x - x_j). Interpolants produced by
// bl_interpolate are of this form, but any coefficients are allowed.
struct BandlimitedInterpolant {
  BandlimitSpec spec;
  std::vector<double> sites;
  std::vector<double> alpha;

  double operator()(double x) const;
  // |fhat(w)|^2 = (1+w^2)^(-2t) |sum alpha_j e^{-i w x_j}|^2 on |w| <= sigma.
  double spectrum(double w) const;
  BandSpectrum measure() const;
  double sobolev_norm(double t) const;
};

// (1/2pi) int_{-sigma}^{sigma} (1+w^2)^(-t) cos(w r) dw.
double truncated_kernel(const BandlimitSpec& spec, double r);

Matrix truncated_kernel_matrix(const BandlimitSpec& spec, std::span<const double> sites);

// Throws BandTooNarrowError when the kernel matrix does not factor.
BandlimitedInterpolant bl_interpolate(const BandlimitSpec& spec, std::span<const double> sites,
                                      std::span<const double> values,
                                      const FactorOptions& opt = {});

// Largest theta in [0, 1] whose shell still carries half of the H^t energy,
// located by bisection to 1e-6. Throws ZeroFunctionError for f = 0.
double spectral_median(const BandSpectrum& f, double t);
double spectral_median(const BandlimitedInterpolant& f, double t);

struct InverseCheck {
  double s = 0.0;
  double m = 0.0;
  double lhs = 0.0;  // |f|_{H^m}
  double rhs = 0.0;  // |f|_{H^s} exp(1/4 int_s^m ln(1 + (beta_t sigma)^2) dt)
  bool holds = false;
  double beta_min = 0.0;
  double beta_max = 0.0;
};

inline constexpr double kInverseCheckStep = 0.05;

// Trapezoid rule in t with step at most 0.05; holds means lhs >= rhs (1 - 1e-6).
InverseCheck inverse_inequality_check(const BandSpectrum& f, double s, double m);
InverseCheck inverse_inequality_check(const BandlimitedInterpolant& f, double s, double m);

struct InverseInstance {
  BandlimitedInterpolant f;
  InverseCheck check;
  InverseCheck check_doubled;  // same instance, twice the quadrature nodes
  double rel_change = 0.0;     // max relative change of lhs and rhs
};

// Random expansions with sigma in [2, 20], t in [0, 3], 3 to 19 sites in
// [-1, 1], coefficients in [-1, 1] and orders 0.6 < s < m < 5, each checked
// with `nodes` and 2 * nodes quadrature nodes. Deterministic in `seed`.
std::vector<InverseInstance> inverse_property_suite(std::size_t instances, std::uint64_t seed,
                                                    std::size_t nodes = 256);

struct LowerBoundPoint {
  double m = 0.0;
  double s_star = 0.0;
  double prefactor = 0.0;  // |f*_{sigma,s*}|_{H^s*}
  double exponent = 0.0;   // 1/4 int_{s*}^m ln(1 + (beta_t sigma)^2) dt, beta from f*_{sigma,m}
  double bound = 0.0;      // prefactor * exp(exponent)
  double eta = 0.0;        // kernel native norm at m, NaN when it did not factor
  bool ok = true;
  std::string error;
};

struct LowerBoundOptions {
  double kappa = 3.2;  // sigma = kappa / q
  std::size_t quad_nodes = 256;
  EpsPolicy eps;       // for the companion eta(m)
  FactorOptions factor;
};

// Data are RMS-normalized first, as for the norm profile. Orders whose
// band-limited system does not factor are reported with ok = false.
std::vector<LowerBoundPoint> lower_bound_curve(std::span<const double> sites, std::span<const double> values,
                                               double s, const MGrid& grid, const LowerBoundOptions& opt = {});

}  // namespace regs
