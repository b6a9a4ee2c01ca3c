#include "fowler/symbols.hpp"

#include <cmath>

#include "fowler/errors.hpp"

namespace fowler {

namespace {
constexpr double kInvSqrt2Pi = 0.39894228040143267793994605993438;
constexpr double kHalfSqrt3 = 0.86602540378443864676372317075294;
}  // namespace

double gamma_two_thirds() { return kGammaTwoThirds; }

cplx phi_symbol(double xi) {
  const auto k = fowler_constants();
  return {k.a, k.b * sgn(xi)};
}

cplx psi_hat(double xi) {
  if (xi == 0.0) throw DomainError("psi_hat: symbol is singular at xi = 0");
  const double mag = kInvSqrt2Pi * kGammaTwoThirds * std::pow(std::abs(xi), -2.0 / 3.0);
  return mag * cplx{0.5, -kHalfSqrt3 * sgn(xi)};
}

cplx g_symbol(double xi) {
  if (xi == 0.0) return {0.0, 0.0};
  const double mag = kGammaTwoThirds * std::cbrt(std::abs(xi));
  return mag * cplx{kHalfSqrt3, 0.5 * sgn(xi)};
}

cplx linear_symbol(double xi, double eta) {
  const double ax = std::abs(xi);
  const double p43 = ax * std::cbrt(ax);
  return cplx{-xi * xi, 0.0} + eta * p43 * phi_symbol(xi);
}

cplx semigroup_symbol(double xi, double t) { return semigroup_symbol(xi, t, 1.0); }

cplx semigroup_symbol(double xi, double t, double eta) {
  if (t == 0.0 || xi == 0.0) return {1.0, 0.0};
  return std::exp(t * linear_symbol(xi, eta));
}

double amplification_cutoff() { return std::pow(fowler_constants().a, 1.5); }

double min_decay_rate() {
  const double a = fowler_constants().a;
  return -4.0 / 27.0 * a * a * a;
}

double min_decay_rate_argmin() { return std::pow(2.0 * fowler_constants().a / 3.0, 1.5); }

}  // namespace fowler
