#include <cmath>
#include <numbers>

#include "doctest.h"
#include "regs/errors.hpp"
#include "regs/special.hpp"

using regs::special::bessel_k;
using regs::special::gamma_fn;
using regs::special::matern_radial;

namespace {

struct Reference {
  double nu, x, value;
};

// 30-digit integral representation K_nu(x) = int_0^inf exp(-x cosh t) cosh(nu t) dt.
constexpr Reference kReference[] = {
    {0.0, 1.0, 0.4210244382407083333356},     {1.0, 1.0, 0.6019072301972345747375},
    {1.5, 1.0, 0.9221370088957891168792},     {0.3, 0.01, 6.890102638292769543174},
    {0.3, 1.5, 0.2189379547321730182489},     {2.7, 0.2, 384.8269361781618860268},
    {4.9, 7.0, 0.002028855080549566111821},   {0.0, 20.0, 5.741237815336524292717e-10},
    {1.0, 2.0, 0.1398658818165224272846},     {3.0, 0.5, 62.05790952993025638624},
    {4.5, 40.0, 1.077444791385041935577e-18}, {0.75, 1e-6, 32585.64305842638156671},
    {5.0, 50.0, 4.367182254100986330041e-23}, {2.0, 1.999, 0.2541537326173566254802},
    {2.0, 2.001, 0.2533664808473968337442},   {9.5, 3.0, 976.5240593586822152775},
    {0.5, 1.0, 0.4610685044478945584396},     {2.5, 3.0, 0.08406063197411738265286},
};

double rel(double a, double b) { return std::fabs(a - b) / std::fabs(b); }

}  // namespace

TEST_CASE("bessel_k matches high-precision quadrature") {
  for (const auto& r : kReference) {
    CAPTURE(r.nu);
    CAPTURE(r.x);
    CHECK(rel(bessel_k(r.nu, r.x), r.value) < 1e-10);
  }
}

TEST_CASE("bessel_k half-integer closed forms") {
  const double pi = std::numbers::pi;
  for (double x : {0.05, 0.3, 1.0, 3.0, 11.0, 35.0}) {
    const double k12 = std::sqrt(pi / (2 * x)) * std::exp(-x);
    CHECK(rel(bessel_k(0.5, x), k12) < 1e-12);
    CHECK(rel(bessel_k(1.5, x), k12 * (1 + 1 / x)) < 1e-12);
    CHECK(rel(bessel_k(2.5, x), k12 * (1 + 3 / x + 3 / (x * x))) < 1e-12);
  }
  CHECK(rel(bessel_k(0.5, 1.0), std::sqrt(pi / 2) * std::exp(-1.0)) < 1e-14);
}

TEST_CASE("bessel_k recurrence and symmetry in the order") {
  for (double nu : {0.2, 0.5, 1.0, 1.7, 3.3, 6.1}) {
    for (double x : {0.01, 0.4, 1.9, 2.1, 8.0, 25.0}) {
      const double lhs = bessel_k(nu + 1, x);
      const double rhs = bessel_k(nu - 1, x) + 2 * nu / x * bessel_k(nu, x);
      CAPTURE(nu);
      CAPTURE(x);
      CHECK(rel(lhs, rhs) < 1e-10);
      CHECK(bessel_k(-nu, x) == bessel_k(nu, x));
    }
  }
}

TEST_CASE("bessel_k domain") {
  CHECK_THROWS_AS(bessel_k(1.0, 0.0), regs::DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, -1.0), regs::DomainError);
  CHECK_THROWS_AS(bessel_k(1.0, NAN), regs::DomainError);
  CHECK(std::isinf(bessel_k(9.0, 1e-300)));
}

TEST_CASE("gamma_fn") {
  CHECK(gamma_fn(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rel(gamma_fn(0.5), std::sqrt(std::numbers::pi)) < 1e-14);
  CHECK(rel(gamma_fn(4.0), 6.0) < 1e-14);
  CHECK_THROWS_AS(gamma_fn(0.0), regs::DomainError);
}

TEST_CASE("matern_radial limit and derivative identity") {
  for (double mu : {0.25, 1.0, 2.5, 4.0}) {
    CHECK(rel(matern_radial(mu, 0.0), std::pow(2.0, mu - 1) * gamma_fn(mu)) < 1e-14);
    // The leading correction is of order x^(2 mu).
    CHECK(rel(matern_radial(mu, 1e-9), matern_radial(mu, 0.0)) < 10 * std::pow(1e-9, std::min(2 * mu, 1.0)));
    for (double x : {0.3, 1.0, 4.0}) {
      const double h = 1e-5;
      const double fd = (matern_radial(mu, x + h) - matern_radial(mu, x - h)) / (2 * h);
      CHECK(rel(fd, -x * matern_radial(mu - 1, x)) < 1e-7);
    }
  }
  CHECK(std::isinf(matern_radial(0.0, 0.0)));
}
