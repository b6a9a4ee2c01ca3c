#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include "fowler/errors.hpp"
#include "fowler/ivp.hpp"
#include "oracles.hpp"

using namespace fowler;

namespace {

SimulationConfig base_config(int n = 128, double L = 10.0) {
  SimulationConfig cfg;
  cfg.grid = Grid(n, L);
  cfg.dt = 1e-3;
  cfg.t_final = 0.1;
  cfg.output_every = 10;
  return cfg;
}

SpectralField smooth_data(const Grid& g) {
  std::vector<double> u(g.n());
  const double L = g.half_length();
  for (int j = 0; j < g.n(); ++j) {
    const double x = g.x(j);
    u[j] = std::exp(-x * x) + 0.3 * std::sin(std::numbers::pi * x / L) * std::exp(-0.2 * x * x) - 0.2;
  }
  return to_spectral(u, g);
}

double sup_diff(const SpectralField& a, const SpectralField& b) { return sup_norm(to_physical(a - b)); }

}  // namespace

TEST_CASE("phi functions: series and recursion agree across |z| = 1") {
  for (cplx z : {cplx(0.999, 0.0), cplx(-1.001, 0.0), cplx(0.3, 0.95), cplx(-30.0, 2.0), cplx(1e-9, 0.0)}) {
    for (int k = 1; k <= 4; ++k) {
      // phi_k(z) = (phi_{k-1}(z) - 1/(k-1)!) / z, checked where the division is benign
      if (std::abs(z) > 0.5) {
        double f = 1.0;
        for (int j = 2; j < k; ++j) f *= j;
        CHECK(std::abs(phi_function(k, z) - (phi_function(k - 1, z) - 1.0 / f) / z) < 1e-13);
      }
    }
  }
  CHECK(std::abs(phi_function(1, 0.0) - 1.0) < 1e-16);
  CHECK(std::abs(phi_function(3, 0.0) - 1.0 / 6.0) < 1e-16);
  CHECK_THROWS_AS(phi_function(5, 0.0), DomainError);
}

TEST_CASE("zero and constants are fixed points of both schemes") {
  auto cfg = base_config();
  for (auto scheme : {Scheme::etd_rk, Scheme::picard}) {
    cfg.scheme = scheme;
    const SpectralField zero(cfg.grid);
    CHECK(sup_norm(to_physical(duhamel_step(zero, cfg.dt, cfg))) == 0.0);
    std::vector<double> c(cfg.grid.n(), 0.7);
    const auto C = to_spectral(c, cfg.grid);
    CHECK(sup_diff(duhamel_step(C, cfg.dt, cfg), C) < 1e-15);
  }
}

TEST_CASE("Picard and ETD agree after one step; Picard residuals contract") {
  auto cfg = base_config();
  const auto u = smooth_data(cfg.grid);
  const auto a = duhamel_step(u, 1e-3, cfg);
  cfg.scheme = Scheme::picard;
  PicardReport rep;
  const auto b = duhamel_step(u, 1e-3, cfg, &rep);
  CHECK(sup_diff(a, b) < 1e-8);
  REQUIRE(rep.residuals.size() >= 3);
  const auto& r = rep.residuals;
  const std::size_t m = r.size();
  CHECK(r[m - 1] < r[m - 2]);
  CHECK(r[m - 2] < r[m - 3]);
  CHECK(rep.max_norm <= rep.ball.M);
  CHECK(rep.ball.M == doctest::Approx(1.0 + 2.0 * c1_norm(u)));
  CHECK(cfg.dt < rep.ball.T_local);
}

TEST_CASE("Picard failure modes are reported") {
  auto cfg = base_config();
  cfg.scheme = Scheme::picard;
  cfg.picard_max_iter = 2;
  cfg.picard_tol = 1e-15;
  CHECK_THROWS_AS(duhamel_step(smooth_data(cfg.grid), cfg.dt, cfg), PicardError);
}

TEST_CASE("blow-up detection and step validation") {
  auto cfg = base_config();
  std::vector<double> u(cfg.grid.n(), 0.0);
  u[5] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(duhamel_step(to_spectral(u, cfg.grid), cfg.dt, cfg), BlowUpError);
  std::vector<double> big(cfg.grid.n(), 2e8);
  try {
    duhamel_step(to_spectral(big, cfg.grid), cfg.dt, cfg, nullptr, 0.25);
    FAIL("expected blow-up");
  } catch (const BlowUpError& e) {
    CHECK(e.time() == doctest::Approx(0.251));
  }
  CHECK_THROWS_AS(duhamel_step(smooth_data(cfg.grid), 2.0 * cfg.dt, cfg), DomainError);
  CHECK_THROWS_AS(duhamel_step(smooth_data(Grid(64, 10.0)), cfg.dt, cfg), ShapeError);
}

TEST_CASE("eta = 0 reduces to the independent viscous Burgers oracle") {
  const int n = 64;
  const double L = 8.0;
  auto cfg = base_config(n, L);
  cfg.eta = 0.0;
  std::vector<double> u(n);
  for (int j = 0; j < n; ++j) u[j] = 0.8 * std::exp(-(cfg.grid.x(j) - 0.5) * (cfg.grid.x(j) - 0.5));
  const oracle::Burgers ref(n, L);
  const auto c1 = ref.step(ref.forward(u), 1e-3, 20);
  const auto U1 = duhamel_step(to_spectral(u, cfg.grid), 1e-3, cfg);
  double err = 0.0;
  for (int m = -n / 2 + 1; m < n / 2; ++m) err = std::max(err, std::abs(U1.mode(m) - c1[m + n / 2]));
  CHECK(err < 1e-12);
  CHECK(sup_norm(to_physical(U1)) > 0.5);
}

TEST_CASE("run_ivp: mass conservation, sampling and last-step landing") {
  auto cfg = base_config();
  cfg.t_final = 0.1005;
  cfg.output_every = 25;
  const auto tr = run_ivp(smooth_data(cfg.grid), cfg);
  CHECK(tr.times.front() == 0.0);
  CHECK(tr.times.back() == cfg.t_final);
  CHECK(tr.times.size() == 6);
  for (double m : tr.masses) CHECK(std::abs(m - tr.masses.front()) <= 1e-12 * std::abs(tr.masses.front()));
  cfg.dt = -1.0;
  CHECK_THROWS_AS(run_ivp(smooth_data(cfg.grid), cfg), ConfigError);
}

TEST_CASE("ETD self-convergence is fourth order") {
  auto cfg = base_config();
  cfg.t_final = 0.4;
  cfg.output_every = 1000000;
  const auto u0 = smooth_data(cfg.grid);
  SpectralField r[3] = {u0, u0, u0};
  const double dts[3] = {0.04, 0.02, 0.01};
  for (int i = 0; i < 3; ++i) {
    cfg.dt = dts[i];
    r[i] = run_ivp(u0, cfg).states.back();
  }
  const double p = std::log2(sup_diff(r[0], r[1]) / sup_diff(r[1], r[2]));
  CHECK(p > 3.0);
}

TEST_CASE("continuous dependence fit") {
  auto cfg = base_config();
  cfg.t_final = 0.5;
  cfg.output_every = 25;
  const auto u0 = smooth_data(cfg.grid);
  const auto same = continuous_dependence(u0, u0, cfg);
  CHECK(same.C == 0.0);
  for (double d : same.distances) CHECK(d == 0.0);

  auto perturbed = [&](double eps) {
    SpectralField v = u0;
    v.mode(3) += eps;
    v.mode(-3) += eps;
    return v;
  };
  const auto f1 = continuous_dependence(u0, perturbed(1e-6), cfg);
  const auto f2 = continuous_dependence(u0, perturbed(2e-6), cfg);
  for (std::size_t k = 0; k < f1.times.size(); ++k) {
    CHECK(f1.distances[k] <= f1.C * std::exp(f1.alpha * f1.times[k]) * f1.initial_distance * (1 + 1e-12));
    CHECK(f2.distances[k] / f1.distances[k] == doctest::Approx(2.0).epsilon(0.05));
  }
  CHECK(std::abs(f2.alpha - f1.alpha) <= 0.1 * std::abs(f1.alpha));
}
