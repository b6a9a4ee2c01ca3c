#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fowler/errors.hpp"
#include "fowler/ivp.hpp"
#include "fowler/spectral.hpp"
#include "fowler/symbols.hpp"
#include "fowler/wave.hpp"

using namespace fowler;

namespace {

double sup(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

double sup_diff(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
  return s;
}

const WaveSolver& solver() {
  static const WaveSolver s(1.0, default_line_grid(1.0, 1024));
  return s;
}

std::vector<double> smooth_field(const LineGrid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  double amp[4], freq[4], phase[4];
  for (int k = 0; k < 4; ++k) amp[k] = U(rng), freq[k] = 0.8 * std::abs(U(rng)), phase[k] = 3 * U(rng);
  const double step = U(rng), where = 10 * U(rng);
  std::vector<double> y(g.n());
  for (int j = 0; j < g.n(); ++j) {
    const double x = g.x(j);
    double v = step * std::tanh(0.5 * (x - where));
    for (int k = 0; k < 4; ++k) v += amp[k] * std::sin(freq[k] * x + phase[k]);
    y[j] = v;
  }
  return y;
}

}  // namespace

TEST_CASE("line grid basics") {
  CHECK_THROWS_AS(LineGrid(8, 1.0), DomainError);
  const LineGrid g(101, 5.0);
  CHECK(g.x(0) == -5.0);
  CHECK(g.x(100) == 5.0);
  CHECK(g.x(50) == doctest::Approx(0.0).epsilon(1e-15));
  std::vector<double> one(101, 1.0);
  CHECK(trapezoid(g, one) == doctest::Approx(10.0));
}

TEST_CASE("finite differences are sixth order, including the boundary closures") {
  double prev = 0.0;
  for (int n : {101, 201}) {
    const LineGrid g(n, 2.0);
    std::vector<double> u(n), du(n);
    for (int j = 0; j < n; ++j) u[j] = std::sin(1.3 * g.x(j)), du[j] = 1.3 * std::cos(1.3 * g.x(j));
    const double err = sup_diff(FiniteDifference(g).apply(u), du);
    if (prev > 0.0) CHECK(std::log2(prev / err) > 5.5);
    prev = err;
  }
  const LineGrid g(64, 1.0);
  const FiniteDifference D(g);
  std::vector<double> a(64), b(64);
  for (int j = 0; j < 64; ++j) a[j] = std::cos(j * 0.3), b[j] = std::sin(j * 0.7 + 1.0);
  double lhs = 0, rhs = 0;
  const auto Da = D.apply(a), DTb = D.apply_transpose(b);
  for (int j = 0; j < 64; ++j) lhs += b[j] * Da[j], rhs += DTb[j] * a[j];
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-13));
}

TEST_CASE("profile family identities") {
  for (double c : {0.5, 1.0, 2.0}) {
    const ProfileFamily f{c};
    const LineGrid g = default_line_grid(c, 4096);
    const auto gc = f.sample_g(g), h = f.sample_h(g);
    CHECK(sup_diff(FiniteDifference(g).apply(gc), h) < 1e-10);
    for (double x : {-7.0, -0.3, 0.0, 2.0, 11.0}) {
      CHECK(f.tau(x) == doctest::Approx(c - f.g(x)).epsilon(1e-15));
      CHECK(std::abs(f.l(x) + 2.0 / (c * c) * f.h(x)) < 1e-15);
      CHECK(f.h_prime(x) == doctest::Approx((f.h(x + 1e-5) - f.h(x - 1e-5)) / 2e-5).epsilon(1e-8));
      CHECK(std::abs(c * f.g(x) - 0.5 * f.g(x) * f.g(x) + f.h(x)) < 1e-14);
    }
  }
}

TEST_CASE("exact eta = 0 wave") {
  CHECK(exact_wave_eta0(2.0, 0.0) == 1.0);
  CHECK(exact_wave_eta0(1.5, -60.0) == doctest::Approx(1.5));
  CHECK(exact_wave_eta0(1.5, 60.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(exact_wave_eta0(0.0, 1.0), DomainError);
  const LineGrid g(64, 10.0);
  const auto u = exact_wave_eta0(2.0, g);
  CHECK(u[10] == doctest::Approx(ProfileFamily{1.0}.g(g.x(10))).epsilon(1e-15));
}

TEST_CASE("eta = 0 front moves at speed d/2 in the time-dependent problem") {
  // A plateau of height d = 1 on a wide periodic box: the right edge is the viscous
  // front g_c with c = 1/2.
  const double c = 0.5;
  SimulationConfig cfg;
  cfg.grid = Grid(1024, 80.0);
  cfg.eta = 0.0;
  cfg.dt = 1e-2;
  cfg.t_final = 1.0;
  cfg.output_every = 100;
  std::vector<double> u(cfg.grid.n());
  for (int j = 0; j < cfg.grid.n(); ++j) {
    const double x = cfg.grid.x(j);
    u[j] = c * (std::tanh(0.5 * c * (x + 30.0)) - std::tanh(0.5 * c * x));
  }
  auto front = [&](const std::vector<double>& v) -> double {
    for (int j = cfg.grid.n() / 2 - 200; j < cfg.grid.n() - 1; ++j)
      if (v[j] >= c && v[j + 1] < c) return cfg.grid.x(j) + (v[j] - c) / (v[j] - v[j + 1]) * cfg.grid.dx();
    return NAN;
  };
  const auto tr = run_ivp(to_spectral(u, cfg.grid), cfg);
  const double moved = front(to_physical(tr.states.back())) - front(u);
  CHECK(moved == doctest::Approx(c).epsilon(0.01));
}

TEST_CASE("nonlocal operator annihilates constants") {
  const auto& op = solver().nonlocal();
  for (double k : {-2.0, -0.1, 0.5, 1.0, 3.7}) {
    std::vector<double> v(op.grid().n(), k);
    CHECK(sup(op.apply(v, k)) < 1e-13 * std::max(1.0, std::abs(k)));
  }
}

TEST_CASE("nonlocal operator matches the Fourier multiplier on a decaying profile") {
  const LineGrid g(4096, 30.0);
  const NonlocalOperator op(g);
  const int n = g.n();
  // zero-mean Hermite profile, so the x^{-4/3} tails of periodic images stay negligible
  std::vector<double> phi(n);
  for (int j = 0; j < n; ++j) phi[j] = std::exp(-g.x(j) * g.x(j)) * (1.0 - 2.0 * g.x(j) * g.x(j));
  const auto direct = op.apply(phi, 0.0);
  const int N = 1 << 16;
  const Grid P(N, 0.5 * N * g.dx());
  std::vector<double> pad(N, 0.0);
  const int off = (N - n) / 2;
  for (int j = 0; j < n; ++j) pad[off + j] = phi[j];
  auto U = to_spectral(pad, P);
  for (int i = 0; i < N; ++i) U.coeffs[i] *= i == P.nyquist_index() ? cplx{} : g_symbol(P.wavenumber(i));
  const auto spectral = to_physical(U);
  double err = 0.0;
  for (int j = 0; j < n; ++j) err = std::max(err, std::abs(direct[j] - spectral[off + j]));
  CHECK(err < 1e-6);
}

TEST_CASE("g[g_c] is bounded and vanishes at both ends") {
  const auto& S = solver();
  const auto& gg = S.g_of_gc();
  CHECK(sup(gg) < 5.0);
  CHECK(std::abs(gg.front()) < 0.05);
  CHECK(sup(gg) > 0.1);
  // slow right tail: the step of height 2c seen through x^{-1/3}
  const double xr = S.grid().x(S.grid().n() - 1);
  CHECK(gg.back() == doctest::Approx(-2.0 * S.family().c / std::cbrt(xr)).epsilon(0.02));
  const int q = S.grid().n() * 3 / 4;
  CHECK(std::abs(gg.back()) < std::abs(gg[q]));
}

TEST_CASE("G operator: base point, linearity in eta, Jacobian, quadratic structure") {
  const auto& S = solver();
  const int n = S.grid().n();
  const std::vector<double> zero(n, 0.0);
  CHECK(sup(S.G(0.0, zero)) == 0.0);
  const auto g1 = S.G(0.3, zero);
  for (int j = 0; j < n; ++j) CHECK(g1[j] == doctest::Approx(-0.3 * S.g_of_gc()[j]).epsilon(1e-14));

  auto phi = smooth_field(S.grid(), 5);
  auto v = smooth_field(S.grid(), 6);
  for (int j = 0; j < n; ++j) phi[j] *= 0.1 * S.family().l(S.grid().x(j)), v[j] *= S.family().l(S.grid().x(j));
  const double eta = 0.2;
  const auto Jv = S.jacobian_apply(eta, phi, v);
  double prev = 0.0;
  for (double eps : {1e-2}) {
    std::vector<double> p(n), m(n);
    for (int j = 0; j < n; ++j) p[j] = phi[j] + eps * v[j], m[j] = phi[j] - eps * v[j];
    const auto Gp = S.G(eta, p), Gm = S.G(eta, m);
    std::vector<double> fd(n);
    for (int j = 0; j < n; ++j) fd[j] = (Gp[j] - Gm[j]) / (2 * eps);
    const double err = sup_diff(fd, Jv);
    prev = err;
  }
  CHECK(prev < 1e-12);  // G is quadratic: central differences are exact up to rounding

  const Eigen::MatrixXd J = S.jacobian(eta, phi);
  const Eigen::Map<const Eigen::VectorXd> vv(v.data(), n);
  const Eigen::VectorXd Jm = J * vv;
  for (int j = 0; j < n; j += 37) CHECK(Jm[j] == doctest::Approx(Jv[j]).epsilon(1e-12));

  // G(eta, phi) - G(eta, psi) - dG(eta, psi)(phi - psi) = -(phi - psi)^2 / 2
  const auto psi = v;
  std::vector<double> d(n);
  for (int j = 0; j < n; ++j) d[j] = phi[j] - psi[j];
  const auto Gphi = S.G(eta, phi), Gpsi = S.G(eta, psi), Jd = S.jacobian_apply(eta, psi, d);
  double q = 0.0;
  for (int j = 0; j < n; ++j) q = std::max(q, std::abs(Gphi[j] - Gpsi[j] - Jd[j] + 0.5 * d[j] * d[j]));
  CHECK(q < 1e-12);
}

TEST_CASE("explicit inverse of the base linearization") {
  const auto& S = solver();
  const int n = S.grid().n();
  const std::vector<double> zero(n, 0.0);
  CHECK(sup(S.invert_base_linearization(zero)) == 0.0);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto y = smooth_field(S.grid(), seed);
    const auto g = S.invert_base_linearization(y);
    CHECK(sup_diff(S.jacobian_apply(0.0, zero, g), y) < 1e-5);  // FD error on the coarse test grid
    CHECK(std::abs(S.phase_defect(g)) < 1e-8);
    // left inverse on the constrained space
    const auto back = S.invert_base_linearization(S.jacobian_apply(0.0, zero, g));
    CHECK(sup_diff(back, g) < 1e-4);
  }
  CHECK_THROWS_AS(S.invert_base_linearization(std::vector<double>(7)), ShapeError);
}

TEST_CASE("Newton: trivial start, convergence and the linear-response scaling") {
  const auto& S = solver();
  const auto s0 = S.newton(0.0);
  CHECK(s0.converged);
  CHECK(s0.iterations == 0);
  CHECK(sup(s0.phi) == 0.0);
  double ratio[3];
  int i = 0;
  for (double eta : {0.0125, 0.025, 0.05}) {
    const auto s = S.newton(eta);
    CHECK(s.converged);
    CHECK(s.residual_norm < 1e-10);
    CHECK(std::abs(s.phase_defect) < 1e-8);
    for (int j = 0; j < S.grid().n(); ++j) CHECK(s.full_wave[j] == S.g_c()[j] + s.phi[j]);
    ratio[i++] = sup(s.phi) / eta;
  }
  CHECK(std::max({ratio[0], ratio[1], ratio[2]}) / std::min({ratio[0], ratio[1], ratio[2]}) < 1.2);
  const auto sm = S.newton(-0.05);
  CHECK(sm.converged);
  CHECK(sup(sm.phi) / 0.05 == doctest::Approx(ratio[2]).epsilon(0.2));
  CHECK(sup(S.linear_response()) == doctest::Approx(ratio[0]).epsilon(0.05));
}

TEST_CASE("continuation in eta") {
  const auto& S = solver();
  const auto trivial = S.continue_in_eta(0.0, 3);
  CHECK(trivial.states.size() == 1);
  const auto br = S.continue_in_eta(0.2, 8);
  CHECK(br.states.size() >= 2);
  for (const auto& s : br.states) CHECK(s.residual_norm < 1e-10);
  if (!br.halted) CHECK(br.last_converged_eta == doctest::Approx(0.2));
  const double deta = 0.2 / 8;
  double worst = 0.0;
  for (std::size_t k = 1; k < br.states.size(); ++k)
    worst = std::max(worst, sup_diff(br.states[k].phi, br.states[k - 1].phi) / deta);
  CHECK(worst < 3.0 * sup(S.linear_response()));
  CHECK_THROWS_AS(S.continue_in_eta(0.1, 0), DomainError);
}

TEST_CASE("scaling and Galilean maps keep converged waves converged") {
  const auto& S = solver();
  const auto s = S.newton(0.05);
  const auto same = rescale_wave(s, 1.0);
  CHECK(same.phi == s.phi);
  CHECK(same.c == s.c);
  CHECK(same.eta == s.eta);
  const auto r = rescale_wave(s, 2.0);
  CHECK(r.c == 0.5);
  CHECK(r.eta == doctest::Approx(0.05 / std::pow(2.0, 2.0 / 3.0)));
  CHECK(r.residual_norm < 1e-8);
  const auto gsh = galilean_shift(s, 0.3);
  CHECK(gsh.c == doctest::Approx(1.3));
  CHECK(gsh.residual_norm < 1e-8);
  CHECK_THROWS_AS(rescale_wave(s, 0.0), DomainError);
}

TEST_CASE("solitary-wave quadratic form") {
  const LineGrid g(1024, 40.0);
  std::vector<double> zero(g.n(), 0.0), gauss(g.n()), step(g.n());
  for (int j = 0; j < g.n(); ++j) gauss[j] = std::exp(-g.x(j) * g.x(j)), step[j] = std::tanh(g.x(j));
  CHECK(soliton_identity(g, zero, -1.0).value == 0.0);
  for (double eta : {-1.0, 0.0}) {
    const auto r = soliton_identity(g, gauss, eta);
    CHECK(r.value > 0.0);
    CHECK(r.integrand_min >= 0.0);
  }
  // eta = 0: the form is \int xi^2 |phi^|^2 = \int phi'^2 = sqrt(pi/2) for exp(-x^2)
  CHECK(soliton_identity(g, gauss, 0.0).value == doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-10));
  // large positive eta: low frequencies dominate and the form turns negative
  CHECK(soliton_identity(g, gauss, 10.0).integrand_min < 0.0);
  CHECK_THROWS_AS(soliton_identity(g, step, -1.0), DomainError);
}
