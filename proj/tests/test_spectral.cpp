#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fowler/errors.hpp"
#include "fowler/spectral.hpp"

using namespace fowler;

namespace {

std::vector<double> sample(const Grid& g, double (*f)(double)) {
  std::vector<double> v(g.n());
  for (int j = 0; j < g.n(); ++j) v[j] = f(g.x(j));
  return v;
}

double max_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("grid validation and wavenumbers") {
  CHECK_THROWS_AS(Grid(7, 1.0), DomainError);
  CHECK_THROWS_AS(Grid(8, 0.0), DomainError);
  const Grid g(8, std::numbers::pi);
  CHECK(g.dx() == doctest::Approx(std::numbers::pi / 4));
  CHECK(g.x(0) == doctest::Approx(-std::numbers::pi));
  CHECK(g.wavenumber(1) == doctest::Approx(1.0));
  CHECK(g.wavenumber(7) == doctest::Approx(-1.0));
  CHECK(g.signed_mode(g.nyquist_index()) == -4);
  CHECK(g.storage_index(-1) == 7);
}

TEST_CASE("transform round trip and coefficient convention") {
  const Grid g(64, 5.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  std::vector<double> u(64);
  for (auto& v : u) v = nd(rng);
  const auto U = to_spectral(u, g);
  CHECK(max_diff(to_physical(U), u) < 1e-14);
  // u = cos(k_1 x): coefficients 1/2 at m = +-1 (the x_0 = -L offset is in the phase)
  std::vector<double> c(64);
  for (int j = 0; j < 64; ++j) c[j] = std::cos(std::numbers::pi * g.x(j) / 5.0);
  const auto C = to_spectral(c, g);
  CHECK(std::abs(C.mode(1) - 0.5) < 1e-15);
  CHECK(std::abs(C.mode(-1) - 0.5) < 1e-15);
  CHECK_THROWS_AS(to_spectral(std::vector<double>(10), g), ShapeError);
}

TEST_CASE("spectral derivative, mass and C1 norm") {
  const Grid g(128, std::numbers::pi);
  const auto u = sample(g, [](double x) { return std::sin(3.0 * x) + 0.5; });
  const auto du = to_physical(derivative(to_spectral(u, g)));
  const auto ref = sample(g, [](double x) { return 3.0 * std::cos(3.0 * x); });
  CHECK(max_diff(du, ref) < 1e-12);
  CHECK(mass(to_spectral(u, g)) == doctest::Approx(std::numbers::pi));
  CHECK(c1_norm(to_spectral(u, g)) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("dealiased product removes the upper third and is exact for resolved data") {
  const Grid g(64, std::numbers::pi);
  const auto u = sample(g, [](double x) { return std::cos(2.0 * x); });
  const auto p = to_physical(product(to_spectral(u, g), to_spectral(u, g)));
  const auto ref = sample(g, [](double x) { return 0.5 + 0.5 * std::cos(4.0 * x); });
  CHECK(max_diff(p, ref) < 1e-14);
  auto U = to_spectral(sample(g, [](double x) { return std::cos(25.0 * x); }), g);
  truncate_two_thirds(U);
  CHECK(std::abs(U.mode(25)) == 0.0);
  // flux of u = sin x: (1/2)(sin^2 x)' = sin x cos x
  const auto f = to_physical(nonlinear_flux(to_spectral(sample(g, [](double x) { return std::sin(x); }), g)));
  CHECK(max_diff(f, sample(g, [](double x) { return std::sin(x) * std::cos(x); })) < 1e-14);
  CHECK(nonlinear_flux(to_spectral(u, g)).mode(0) == cplx(0.0, 0.0));
}

TEST_CASE("hermitian symmetry of transforms of real data") {
  const Grid g(32, 2.0);
  std::vector<double> u(32);
  for (int j = 0; j < 32; ++j) u[j] = std::exp(-g.x(j) * g.x(j)) + 0.1 * j;
  auto U = to_spectral(u, g);
  CHECK(hermitian_defect(U) < 1e-15);
  U.mode(3) += cplx(0.0, 1e-3);
  CHECK(hermitian_defect(U) > 1e-4);
  enforce_hermitian(U);
  CHECK(hermitian_defect(U) < 1e-16);
  CHECK(U.coeffs[g.nyquist_index()] == cplx(0.0, 0.0));
}
