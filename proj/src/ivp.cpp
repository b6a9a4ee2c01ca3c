#include "fowler/ivp.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>

#include "fowler/errors.hpp"
#include "fowler/kernel.hpp"
#include "fowler/quadrature.hpp"
#include "fowler/symbols.hpp"

namespace fowler {

namespace {

constexpr int kNodes = 4;

double factorial(int k) {
  double f = 1.0;
  for (int j = 2; j <= k; ++j) f *= j;
  return f;
}

std::vector<cplx> linear_multiplier(const Grid& grid, double eta) {
  std::vector<cplx> L(grid.n());
  for (int i = 0; i < grid.n(); ++i) {
    L[i] = linear_symbol(grid.wavenumber(i), eta);
    if (i == grid.nyquist_index()) L[i] = L[i].real();
  }
  return L;
}

SpectralField nonlinear_term(const SpectralField& u, bool dealias) {
  SpectralField n = nonlinear_flux(u, dealias);
  n *= -1.0;
  return n;
}

// Per-mode coefficients, cached for the last (grid, dt, eta) seen.
struct EtdCoefficients {
  std::vector<cplx> e, e2, q, f1, f2, f3;
};

struct PicardCoefficients {
  std::array<double, kNodes> c{};
  // Propagators exp(L c_i h) and exp(L h); weights W[i][k] for node i (i = kNodes is the
  // end point) applied to N at node k.
  std::array<std::vector<cplx>, kNodes + 1> prop;
  std::array<std::array<std::vector<cplx>, kNodes>, kNodes + 1> w;
};

struct CacheKey {
  int n = 0;
  double L = 0.0, dt = 0.0, eta = 0.0;
  bool operator==(const CacheKey&) const = default;
};

const EtdCoefficients& etd_coefficients(const Grid& grid, double dt, double eta) {
  thread_local CacheKey key;
  thread_local EtdCoefficients co;
  const CacheKey want{grid.n(), grid.half_length(), dt, eta};
  if (key == want && !co.e.empty()) return co;
  const auto L = linear_multiplier(grid, eta);
  const int n = grid.n();
  co.e.resize(n); co.e2.resize(n); co.q.resize(n); co.f1.resize(n); co.f2.resize(n); co.f3.resize(n);
  for (int i = 0; i < n; ++i) {
    const cplx z = dt * L[i];
    const cplx p1 = phi_function(1, z), p2 = phi_function(2, z), p3 = phi_function(3, z);
    co.e[i] = std::exp(z);
    co.e2[i] = std::exp(0.5 * z);
    co.q[i] = 0.5 * dt * phi_function(1, 0.5 * z);
    co.f1[i] = dt * (p1 - 3.0 * p2 + 4.0 * p3);
    co.f2[i] = dt * 2.0 * (p2 - 2.0 * p3);
    co.f3[i] = dt * (4.0 * p3 - p2);
  }
  key = want;
  return co;
}

const PicardCoefficients& picard_coefficients(const Grid& grid, double dt, double eta) {
  thread_local CacheKey key;
  thread_local PicardCoefficients co;
  const CacheKey want{grid.n(), grid.half_length(), dt, eta};
  if (key == want && !co.prop[0].empty()) return co;
  const auto& rule = gauss_legendre(kNodes);
  for (int i = 0; i < kNodes; ++i) co.c[i] = 0.5 * (rule.nodes[i] + 1.0);
  // Monomial coefficients of the Lagrange basis on the nodes c_i (variable s = r / dt).
  std::array<std::array<double, kNodes>, kNodes> basis{};
  for (int k = 0; k < kNodes; ++k) {
    std::array<double, kNodes> poly{};
    poly[0] = 1.0;
    int deg = 0;
    double denom = 1.0;
    for (int m = 0; m < kNodes; ++m) {
      if (m == k) continue;
      // poly *= (s - c_m)
      for (int j = deg + 1; j >= 1; --j) poly[j] = poly[j - 1] - co.c[m] * poly[j];
      poly[0] = -co.c[m] * poly[0];
      ++deg;
      denom *= co.c[k] - co.c[m];
    }
    for (int j = 0; j < kNodes; ++j) basis[k][j] = poly[j] / denom;
  }
  const auto L = linear_multiplier(grid, eta);
  const int n = grid.n();
  for (int i = 0; i <= kNodes; ++i) {
    const double T = (i < kNodes ? co.c[i] : 1.0) * dt;
    co.prop[i].resize(n);
    for (int k = 0; k < kNodes; ++k) co.w[i][k].assign(n, cplx{});
    for (int m = 0; m < n; ++m) {
      const cplx z = T * L[m];
      co.prop[i][m] = std::exp(z);
      // \int_0^T e^{L(T-r)} (r/dt)^j dr = dt^{-j} j! T^{j+1} phi_{j+1}(L T)
      std::array<cplx, kNodes> mom;
      for (int j = 0; j < kNodes; ++j) mom[j] = factorial(j) * T * std::pow(T / dt, j) * phi_function(j + 1, z);
      for (int k = 0; k < kNodes; ++k) {
        cplx acc{};
        for (int j = 0; j < kNodes; ++j) acc += basis[k][j] * mom[j];
        co.w[i][k][m] = acc;
      }
    }
  }
  key = want;
  return co;
}

SpectralField etd_step(const SpectralField& u, double dt, const SimulationConfig& cfg) {
  const auto& co = etd_coefficients(u.grid, dt, cfg.eta);
  const int n = u.grid.n();
  const SpectralField nu = nonlinear_term(u, cfg.dealias);
  SpectralField a(u.grid);
  for (int i = 0; i < n; ++i) a.coeffs[i] = co.e2[i] * u.coeffs[i] + co.q[i] * nu.coeffs[i];
  const SpectralField na = nonlinear_term(a, cfg.dealias);
  SpectralField b(u.grid);
  for (int i = 0; i < n; ++i) b.coeffs[i] = co.e2[i] * u.coeffs[i] + co.q[i] * na.coeffs[i];
  const SpectralField nb = nonlinear_term(b, cfg.dealias);
  SpectralField c(u.grid);
  for (int i = 0; i < n; ++i) c.coeffs[i] = co.e2[i] * a.coeffs[i] + co.q[i] * (2.0 * nb.coeffs[i] - nu.coeffs[i]);
  const SpectralField nc = nonlinear_term(c, cfg.dealias);
  SpectralField out(u.grid);
  for (int i = 0; i < n; ++i) {
    out.coeffs[i] = co.e[i] * u.coeffs[i] + co.f1[i] * nu.coeffs[i] +
                    co.f2[i] * (na.coeffs[i] + nb.coeffs[i]) + co.f3[i] * nc.coeffs[i];
  }
  return out;
}

double sup_difference(const SpectralField& a, const SpectralField& b) {
  return sup_norm(to_physical(a - b));
}

SpectralField picard_step(const SpectralField& u, double dt, const SimulationConfig& cfg, PicardReport* report) {
  const auto& co = picard_coefficients(u.grid, dt, cfg.eta);
  const int n = u.grid.n();
  const PicardBall ball = picard_ball(u);
  PicardReport local;
  PicardReport& rep = report ? *report : local;
  rep = PicardReport{};
  rep.ball = ball;

  // Stage values U_i ~ u(c_i dt); start from the linear flow.
  std::array<SpectralField, kNodes> U{SpectralField(u.grid), SpectralField(u.grid), SpectralField(u.grid),
                                      SpectralField(u.grid)};
  for (int i = 0; i < kNodes; ++i)
    for (int m = 0; m < n; ++m) U[i].coeffs[m] = co.prop[i][m] * u.coeffs[m];

  auto apply_map = [&](const std::array<SpectralField, kNodes>& N, int i) {
    SpectralField v(u.grid);
    for (int m = 0; m < n; ++m) {
      cplx acc = co.prop[i][m] * u.coeffs[m];
      for (int k = 0; k < kNodes; ++k) acc += co.w[i][k][m] * N[k].coeffs[m];
      v.coeffs[m] = acc;
    }
    return v;
  };

  std::array<SpectralField, kNodes> N{SpectralField(u.grid), SpectralField(u.grid), SpectralField(u.grid),
                                      SpectralField(u.grid)};
  double residual = INFINITY;
  for (int it = 1; it <= cfg.picard_max_iter; ++it) {
    for (int k = 0; k < kNodes; ++k) N[k] = nonlinear_term(U[k], cfg.dealias);
    residual = 0.0;
    for (int i = 0; i < kNodes; ++i) {
      SpectralField next = apply_map(N, i);
      residual = std::max(residual, sup_difference(next, U[i]));
      U[i] = std::move(next);
      const double norm = c1_norm(U[i]);
      rep.max_norm = std::max(rep.max_norm, norm);
      if (!(norm <= ball.M)) throw PicardError("Picard iterate left the ball", residual);
    }
    rep.iterations = it;
    rep.residuals.push_back(residual);
    if (residual < cfg.picard_tol) {
      for (int k = 0; k < kNodes; ++k) N[k] = nonlinear_term(U[k], cfg.dealias);
      return apply_map(N, kNodes);
    }
  }
  throw PicardError("Picard iteration did not converge", residual);
}

}  // namespace

cplx phi_function(int k, cplx z) {
  if (k < 0 || k > 4) throw DomainError("phi_function: k must lie in 0..4");
  if (k == 0) return std::exp(z);
  if (std::abs(z) < 1.0) {
    cplx sum{}, term = 1.0 / factorial(k);
    for (int j = 0; j < 30; ++j) {
      sum += term;
      term *= z / double(j + k + 1);
    }
    return sum;
  }
  cplx p = std::exp(z);
  for (int j = 1; j <= k; ++j) p = (p - 1.0 / factorial(j - 1)) / z;
  return p;
}

void SimulationConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(t_final >= dt)) throw ConfigError("t_final", "must be at least dt");
  if (!std::isfinite(eta)) throw ConfigError("eta", "must be finite");
  if (picard_max_iter < 1) throw ConfigError("picard_max_iter", "must be at least 1");
  if (!(picard_tol > 0.0)) throw ConfigError("picard_tol", "must be positive");
  if (output_every < 1) throw ConfigError("output_every", "must be at least 1");
}

PicardBall picard_ball(const SpectralField& u0) {
  PicardBall ball;
  ball.M = 1.0 + 2.0 * c1_norm(u0);
  // The map contracts on the ball when 2 M mu(T) <= 1/2 (mu: time integral of the
  // derivative-kernel envelope).
  double lo = 0.0, hi = 1.0;
  while (2.0 * ball.M * envelope_mu(hi) < 0.5) hi *= 2.0;
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    (2.0 * ball.M * envelope_mu(mid) <= 0.5 ? lo : hi) = mid;
  }
  ball.T_local = lo;
  return ball;
}

SpectralField duhamel_step(const SpectralField& u, double dt, const SimulationConfig& cfg, PicardReport* report,
                           double t0) {
  if (!(dt > 0.0) || dt > cfg.dt * (1.0 + 1e-12)) throw DomainError("duhamel_step: dt outside (0, cfg.dt]");
  if (!(u.grid == cfg.grid)) throw ShapeError("duhamel_step: field is not on the configured grid");
  SpectralField out = cfg.scheme == Scheme::etd_rk ? etd_step(u, dt, cfg) : picard_step(u, dt, cfg, report);
  enforce_hermitian(out);
  const double sup = sup_norm(to_physical(out));
  if (!std::isfinite(sup) || sup > kBlowUpThreshold) throw BlowUpError(t0 + dt, sup);
  return out;
}

Trajectory run_ivp(const SpectralField& u0, const SimulationConfig& cfg) {
  cfg.validate();
  if (!(u0.grid == cfg.grid)) throw ShapeError("run_ivp: initial data is not on the configured grid");
  Trajectory tr;
  auto record = [&](double t, const SpectralField& u) {
    const auto phys = to_physical(u);
    tr.times.push_back(t);
    tr.states.push_back(u);
    tr.masses.push_back(mass(u));
    tr.min_values.push_back(*std::min_element(phys.begin(), phys.end()));
    tr.sup_values.push_back(sup_norm(phys));
  };
  SpectralField u = u0;
  enforce_hermitian(u);
  record(0.0, u);
  const long steps = static_cast<long>(std::ceil(cfg.t_final / cfg.dt - 1e-9));
  double t = 0.0;
  for (long s = 1; s <= steps; ++s) {
    const double h = (s == steps) ? cfg.t_final - t : cfg.dt;
    u = duhamel_step(u, h, cfg, nullptr, t);
    t = (s == steps) ? cfg.t_final : s * cfg.dt;
    if (s % cfg.output_every == 0 || s == steps) record(t, u);
  }
  return tr;
}

DependenceFit continuous_dependence(const SpectralField& u0, const SpectralField& v0, const SimulationConfig& cfg) {
  DependenceFit fit;
  fit.initial_distance = c1_norm(u0 - v0);
  if (fit.initial_distance == 0.0) {
    fit.times = run_ivp(u0, cfg).times;
    fit.distances.assign(fit.times.size(), 0.0);
    return fit;
  }
  const auto tu = run_ivp(u0, cfg);
  const auto tv = run_ivp(v0, cfg);
  fit.times = tu.times;
  for (std::size_t k = 0; k < tu.states.size(); ++k) fit.distances.push_back(c1_norm(tu.states[k] - tv.states[k]));
  // Least-squares slope of log ratio against t.
  double st = 0, sy = 0, stt = 0, sty = 0;
  const double m = static_cast<double>(fit.times.size());
  for (std::size_t k = 0; k < fit.times.size(); ++k) {
    const double y = std::log(fit.distances[k] / fit.initial_distance);
    st += fit.times[k];
    sy += y;
    stt += fit.times[k] * fit.times[k];
    sty += fit.times[k] * y;
  }
  fit.alpha = (m * sty - st * sy) / (m * stt - st * st);
  for (std::size_t k = 0; k < fit.times.size(); ++k)
    fit.C = std::max(fit.C, fit.distances[k] / fit.initial_distance * std::exp(-fit.alpha * fit.times[k]));
  return fit;
}

}  // namespace fowler
