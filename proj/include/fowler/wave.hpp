#pragma once

// Travelling waves u(x, t) = phi(x - c t) of the Fowler equation. Integrated once, the
// profile equation is
//
//   F(eta, u) = c u - u^2/2 + u' - eta g[u] = 0,
//
// and the waves are sought as u = g_c + phi, where g_c = c (1 - tanh(c x / 2)) solves the
// eta = 0 problem. In perturbation form G(eta, phi) = F(eta, g_c + phi), with the phase
// condition \int phi' h_c' dx = 0 fixing the translate.

#include <memory>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "fowler/line_grid.hpp"

namespace fowler {

/// Closed-form profiles for speed c.
struct ProfileFamily {
  double c;

  double g(double x) const;        ///< c (1 - tanh(c x / 2))
  double h(double x) const;        ///< g_c' = -(c^2/2) sech^2(c x / 2)
  double h_prime(double x) const;  ///< h_c'
  double tau(double x) const;      ///< c - g_c = c tanh(c x / 2)
  double l(double x) const;        ///< sech^2(c x / 2) = -(2/c^2) h_c
  double l_prime(double x) const;

  std::vector<double> sample_g(const LineGrid& grid) const;
  std::vector<double> sample_h(const LineGrid& grid) const;
  std::vector<double> sample_h_prime(const LineGrid& grid) const;
  std::vector<double> sample_tau(const LineGrid& grid) const;
  std::vector<double> sample_l(const LineGrid& grid) const;
};

/// The eta = 0 wave of speed d/2 at t = 0: (d/2)(1 - tanh(d x / 4)). Throws DomainError for d = 0.
double exact_wave_eta0(double d, double x);
std::vector<double> exact_wave_eta0(double d, const LineGrid& grid);

/// Default truncation for speed c: n = 4096 points on [-60/c, 60/c].
LineGrid default_line_grid(double c, int n = 4096);

/// c u - u^2/2 + u' - eta g[u] - (c u_R - u_R^2/2): the once-integrated profile equation,
/// normalized so that it vanishes for a wave with right state u_R. u_left feeds g[u].
std::vector<double> travelling_residual(const NonlocalOperator& op, std::span<const double> u, double c, double eta,
                                        double u_left, double u_right = 0.0);

/// Same, with u' supplied instead of differenced.
std::vector<double> travelling_residual(const NonlocalOperator& op, std::span<const double> u,
                                        std::span<const double> du, double c, double eta, double u_left,
                                        double u_right = 0.0);

struct WaveState {
  LineGrid grid{16, 1.0};
  double c = 0.0;
  double eta = 0.0;
  std::vector<double> phi;        ///< perturbation of g_c
  std::vector<double> full_wave;  ///< g_c + phi
  double residual_norm = 0.0;     ///< sup |G(eta, phi)|
  double phase_defect = 0.0;      ///< discrete \int phi' h_c' dx
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
};

struct ContinuationResult {
  std::vector<WaveState> states;  ///< converged states, eta = 0 first
  bool halted = false;
  double last_converged_eta = 0.0;
};

class WaveSolver {
 public:
  explicit WaveSolver(double c);
  WaveSolver(double c, const LineGrid& grid);

  double c() const { return family_.c; }
  const LineGrid& grid() const { return grid_; }
  const ProfileFamily& family() const { return family_; }
  const NonlocalOperator& nonlocal() const { return *op_; }
  const FiniteDifference& fd() const { return fd_; }
  const std::vector<double>& g_c() const { return gc_; }
  /// g[g_c], with left state 2c.
  const std::vector<double>& g_of_gc() const { return g_gc_; }

  std::vector<double> G(double eta, std::span<const double> phi) const;
  /// d/dphi G(eta, phi) v = (tau_c - phi) v + v' - eta g[v].
  std::vector<double> jacobian_apply(double eta, std::span<const double> phi, std::span<const double> v) const;
  /// Dense Jacobian on the grid.
  Eigen::MatrixXd jacobian(double eta, std::span<const double> phi) const;

  /// Discrete \int phi' h_c' dx (trapezoid on the FD derivative).
  double phase_defect(std::span<const double> phi) const;
  const std::vector<double>& phase_row() const { return phase_row_; }

  /// Solves tau_c g + g' = y with \int g' h_c' dx = 0 by variation of parameters:
  /// g = lambda l_c + l_c \int_0^x y / l_c, lambda from the phase condition.
  std::vector<double> invert_base_linearization(std::span<const double> y) const;

  /// First-order branch direction d phi / d eta at eta = 0.
  std::vector<double> linear_response() const;

  /// Bordered Newton iteration for G(eta, phi) = 0 with the phase condition. Stops when
  /// sup |G| < tol or after max_iter iterations (returned unconverged). Throws
  /// SingularMatrixError if the bordered matrix cannot be factored.
  WaveState newton(double eta, std::span<const double> phi0, int max_iter = 25, double tol = 1e-10) const;
  WaveState newton(double eta) const;

  /// Natural-parameter continuation from eta = 0 in `steps` equal increments, stopping
  /// at the first failed Newton solve. Throws FowlerError if the first step fails.
  ContinuationResult continue_in_eta(double eta_target, int steps) const;

  /// Left singular vector of the eta = 0 Jacobian used as the bordering column.
  const std::vector<double>& bordering_column() const;

 private:
  WaveState make_state(double eta, std::vector<double> phi) const;

  ProfileFamily family_;
  LineGrid grid_;
  FiniteDifference fd_;
  std::shared_ptr<const NonlocalOperator> op_;
  std::vector<double> gc_, tau_, g_gc_, phase_row_;
  mutable std::vector<double> border_;
};

/// Remark-style scaling: x -> lambda x, u -> u / lambda, c -> c / lambda,
/// eta -> eta / lambda^{2/3}. The result lives on the scaled grid; residual_norm is
/// recomputed there. Throws DomainError for lambda <= 0.
WaveState rescale_wave(const WaveState& state, double lambda);

/// A wave plus a constant: u + k travels at c + k.
struct ShiftedWave {
  LineGrid grid{16, 1.0};
  std::vector<double> u;
  double c = 0.0;
  double eta = 0.0;
  double u_left = 0.0;
  double u_right = 0.0;
  double residual_norm = 0.0;
};
ShiftedWave galilean_shift(const WaveState& state, double k);

struct SolitonReport {
  double value = 0.0;            ///< \int (xi^2 - eta a |xi|^{4/3}) |phi^|^2 dxi
  double integrand_min = 0.0;    ///< smallest sampled integrand value
};

/// Evaluates the quadratic form by a zero-padded FFT of the profile. Throws DomainError
/// if the profile does not decay at both ends.
SolitonReport soliton_identity(const LineGrid& grid, std::span<const double> profile, double eta);

}  // namespace fowler
