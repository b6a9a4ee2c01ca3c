#pragma once

// Closed-form constants and Fourier multipliers of the Fowler operator
//
//   u_t + (u^2/2 - u_x + g[u])_x = 0,   g[u] = psi * u_x,   psi(x) = x^{-1/3} 1_{x>0}.
//
// Fourier convention: f^(xi) = (2 pi)^{-1/2} \int e^{-i xi x} f(x) dx.
// Fractional powers of xi are |xi|^p with the sign carried by sgn(xi), sgn(0) = 0.

#include <complex>

namespace fowler {

using cplx = std::complex<double>;

/// Gamma(2/3), validated in the test suite against an independent quadrature of
/// \int_0^inf t^{-1/3} e^{-t} dt.
inline constexpr double kGammaTwoThirds = 1.3541179394264004169452880281545;

struct FowlerConstants {
  double gamma23;  ///< Gamma(2/3)
  double a;        ///< Gamma(2/3) / 2
  double b;        ///< -(sqrt 3 / 2) Gamma(2/3)
};

constexpr FowlerConstants fowler_constants() {
  // sqrt(3)/2 spelled out so the function stays constexpr.
  constexpr double half_sqrt3 = 0.86602540378443864676372317075294;
  return {kGammaTwoThirds, 0.5 * kGammaTwoThirds, -half_sqrt3 * kGammaTwoThirds};
}

double gamma_two_thirds();

/// sgn with sgn(0) = 0.
constexpr double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

/// Phi(xi) = a + i b sgn(xi).
cplx phi_symbol(double xi);

/// Fourier transform of psi. Throws DomainError at xi = 0.
cplx psi_hat(double xi);

/// Multiplier m_g with (g[u])^ = m_g u^, i.e. Gamma(2/3)(sqrt3/2 + i/2 sgn xi)|xi|^{1/3}.
cplx g_symbol(double xi);

/// Generator of the linear flow for nonlocal strength eta:
/// -xi^2 + eta |xi|^{4/3} Phi(xi). With eta = 1, semigroup_symbol = exp(t * this).
cplx linear_symbol(double xi, double eta = 1.0);

/// K^(xi, t) = exp(-t [xi^2 - |xi|^{4/3} Phi(xi)]).
cplx semigroup_symbol(double xi, double t);

/// Same for nonlocal strength eta.
cplx semigroup_symbol(double xi, double t, double eta);

/// Frequency below which the linear flow amplifies: |K^| > 1 for 0 < |xi| < a^{3/2}.
double amplification_cutoff();

/// min over xi of xi^2 - a|xi|^{4/3}, equal to -(4/27) a^3.
double min_decay_rate();

/// Argument of that minimum, (2a/3)^{3/2}.
double min_decay_rate_argmin();

}  // namespace fowler
