#pragma once

// Time stepping of u_t = L u - (u^2/2)_x on the periodic grid, where L is the linear
// multiplier -k^2 + eta |k|^{4/3} (a + i b sgn k).

#include <optional>
#include <vector>

#include "fowler/spectral.hpp"

namespace fowler {

enum class Scheme { picard, etd_rk };

struct SimulationConfig {
  Grid grid{256, 20.0};
  double dt = 1e-3;
  double t_final = 1.0;
  double eta = 1.0;
  bool dealias = true;
  Scheme scheme = Scheme::etd_rk;
  int picard_max_iter = 50;
  double picard_tol = 1e-13;
  int output_every = 100;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralField> states;
  std::vector<double> masses;
  std::vector<double> min_values;
  std::vector<double> sup_values;
};

/// Ball of the fixed-point argument: radius M = 1 + 2 ||u0||_{C1} and a time below
/// which the Picard map contracts on it.
struct PicardBall {
  double M = 0.0;
  double T_local = 0.0;
};

PicardBall picard_ball(const SpectralField& u0);

struct PicardReport {
  int iterations = 0;
  std::vector<double> residuals;  ///< sup-norm change per iteration
  double max_norm = 0.0;          ///< largest C1 norm of an iterate
  PicardBall ball;
};

/// Sup|u| above which a run is declared blown up.
inline constexpr double kBlowUpThreshold = 1e8;

/// One step of size dt from time t0 (t0 only labels a blow-up). Throws PicardError if
/// the fixed-point iteration fails and BlowUpError on NaN or sup|u| > 1e8.
SpectralField duhamel_step(const SpectralField& u, double dt, const SimulationConfig& cfg,
                           PicardReport* report = nullptr, double t0 = 0.0);

/// Runs from t = 0 to t_final, sampling every output_every steps and at the final time.
/// The last step is shortened to land on t_final.
Trajectory run_ivp(const SpectralField& u0, const SimulationConfig& cfg);

struct DependenceFit {
  double C = 0.0;
  double alpha = 0.0;
  double initial_distance = 0.0;
  std::vector<double> times;
  std::vector<double> distances;  ///< ||u(t) - v(t)||_{C1}
};

/// Runs both solutions and fits ||u - v||(t) <= C e^{alpha t} ||u0 - v0||: alpha is the
/// least-squares growth rate of log(||u - v|| / ||u0 - v0||), C the smallest constant that
/// then bounds every sample. Identical data give C = alpha = 0 and zero distances.
DependenceFit continuous_dependence(const SpectralField& u0, const SpectralField& v0, const SimulationConfig& cfg);

/// phi_k(z) = sum_j z^j / (j + k)!, for k = 0..4.
cplx phi_function(int k, cplx z);

}  // namespace fowler
