#pragma once

namespace regs::special {

// Modified Bessel function of the second kind K_nu(x) for real order.
//
// K_{-nu} = K_nu, so only |nu| matters. Requires x > 0 and |nu| <= 10.
// For arguments small enough that the result exceeds the double range the
// function returns +infinity instead of failing. Throws DomainError for
// x <= 0 or non-finite input.
double bessel_k(double nu, double x);

// Gamma function for x > 0. Throws DomainError otherwise.
double gamma_fn(double x);

// Radial Whittle-Matern profile psi_mu(x) = x^mu K_|mu|(x), x >= 0.
//
// At x = 0 this is the limit 2^(mu-1) Gamma(mu) for mu > 0 and +infinity
// for mu <= 0. Satisfies psi_mu'(x) = -x psi_{mu-1}(x).
double matern_radial(double mu, double x);

}  // namespace regs::special
