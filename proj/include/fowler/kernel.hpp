#pragma once

// The linear solution operator E(t) and its physical-space kernel
//
//   K(x, t) = (2 pi)^{-1/2} \int K^(xi, t) e^{i x xi} dxi,
//   K^(xi, t) = exp(-t [xi^2 - |xi|^{4/3} (a + i b sgn xi)]),
//
// realized by direct quadrature on the line. K^ is not smooth at xi = 0, so K has an
// algebraic right tail ~ -1.11 t x^{-7/3}; the left tail decays faster than any power.
// Norms and masses therefore add the integral of the far-field series beyond the
// sampled window.

#include <vector>

#include "fowler/spectral.hpp"

namespace fowler {

inline constexpr double kDefaultQuadTol = 1e-10;

/// E(t) u, mode by mode. The unpaired Nyquist mode is advanced with the real part of
/// the exponent so that real fields stay real; the semigroup law still holds exactly.
SpectralField apply_semigroup(double t, const SpectralField& u, double eta = 1.0);

/// Cut-off frequency: beyond it |K^| <= exp(-t xi^2 / 2) < tol.
double truncation_frequency(double t, double tol);

struct KernelSample {
  double t = 0.0;
  std::vector<double> xs;          ///< symmetric uniform grid on [-X, X]
  std::vector<double> values;      ///< K(x_j, t)
  std::vector<double> derivative;  ///< d/dx K(x_j, t)
  double quad_tol = kDefaultQuadTol;
  double achieved_tol = 0.0;       ///< max change under panel refinement
  double imag_residue = 0.0;       ///< max |Im| of the inverse transform
};

/// Samples K(., t) and its derivative on n_pts points of [-X, X]. Throws DomainError
/// for t <= 0 and QuadratureError if panel refinement does not settle to quad_tol.
KernelSample kernel_realize(double t, double X, int n_pts, double quad_tol = kDefaultQuadTol);

/// Single point evaluation of K(x, t) (same quadrature as kernel_realize).
double kernel_value(double x, double t, double quad_tol = kDefaultQuadTol);

/// Far-field series of K(x, t) for large positive x, and of its x-derivative.
double kernel_far_field(double x, double t);
double kernel_far_field_derivative(double x, double t);
/// \int_X^inf K(x, t) dx from the far-field series.
double kernel_tail_mass(double X, double t);

/// Discrete L1 data of K(., t) converged under x-grid refinement.
struct KernelNorms {
  double t = 0.0;
  double l1 = 0.0;             ///< ||K(., t)||_L1
  double derivative_l1 = 0.0;  ///< ||d/dx K(., t)||_L1
  double mass = 0.0;           ///< \int K dx (-> sqrt(2 pi))
  double derivative_mass = 0.0;///< \int d/dx K dx (-> 0)
  double min_value = 0.0;      ///< min_x K(x, t)
  double argmin = 0.0;
  double window = 0.0;         ///< sampled half-width X
  double spacing = 0.0;        ///< final grid spacing
  double refinement_change = 0.0;  ///< relative change of l1 at the last refinement
};

KernelNorms kernel_norms(double t, double quad_tol = kDefaultQuadTol);
double kernel_l1(double t, double quad_tol = kDefaultQuadTol);
double kernel_derivative_l1(double t, double quad_tol = kDefaultQuadTol);

enum class EnvelopeKind { l1_kernel, l1_kernel_derivative };

/// 1 + t^2 e^{(4/27) a^3 t} or t^{-1/2} + t^2 e^{(4/27) a^3 t}.
double envelope(EnvelopeKind kind, double t);
/// r + r^2 e^{(4/27) a^3 r}, the time integral of the kernel envelope.
double envelope_nu(double r);
/// sqrt(r) + r^2 e^{(4/27) a^3 r}, the time integral of the derivative envelope.
double envelope_mu(double r);

/// G(y, s) = (2 pi)^{-1} \int e^{i y xi} exp(-s |xi|^{4/3} (a + i b sgn xi)) dxi,
/// sampled on n_pts points of [-Y, Y].
std::vector<double> fractional_kernel_realize(double s, double Y, int n_pts, double quad_tol = kDefaultQuadTol);

struct SelfSimilarReport {
  double t = 0.0;
  double discrepancy = 0.0;   ///< max |K(x,t) - t^{-1/2}(K(.,1) * G(., 1-t^{1/3}))(x/sqrt t)|
  double g_l1 = 0.0;          ///< ||G(., 1 - t^{1/3})||_L1
  double g_envelope = 0.0;    ///< s^{3/4} + s^{-3/4}, s = 1 - t^{1/3}
  double spacing = 0.0;       ///< convolution lattice spacing
  bool resolved = true;       ///< false when G is narrower than the lattice can carry
};

/// Checks the factorization K(., t) = t^{-1/2} (K(., 1) * G(., 1 - t^{1/3}))(. / sqrt t)
/// on |x| <= X. Throws DomainError unless 0 < t < 1.
SelfSimilarReport selfsimilar_check(double t, double X, double spacing = 0.02,
                                    double quad_tol = kDefaultQuadTol);

/// ||G(., s)||_L1 with the far-field tail included.
double fractional_kernel_l1(double s, double spacing, double quad_tol = kDefaultQuadTol);

}  // namespace fowler
