#pragma once

// Reference computations written independently of the library, used to freeze
// derived values in the tests.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

/// Gamma(2/3) = \int_0^inf 3 s exp(-s^3) ds by composite Simpson on [0, 7] with
/// Richardson extrapolation (the integrand is smooth after the cube substitution).
inline double gamma_two_thirds() {
  auto simpson = [](int panels) {
    const double a = 0.0, b = 7.0, h = (b - a) / panels;
    auto f = [](double s) { return 3.0 * s * std::exp(-s * s * s); };
    double sum = f(a) + f(b), comp = 0.0;  // Kahan summation
    for (int i = 1; i < panels; ++i) {
      const double y = (i % 2 ? 4.0 : 2.0) * f(a + i * h) - comp;
      const double t = sum + y;
      comp = (t - sum) - y;
      sum = t;
    }
    return sum * h / 3.0;
  };
  const double s1 = simpson(4000), s2 = simpson(8000);
  return s2 + (s2 - s1) / 15.0;
}

/// Viscous Burgers u_t + (u^2/2)_x = u_xx on [-L, L) with a naive O(n^2) DFT, the same
/// 2/3 truncation as the solver, and classical RK4 in small substeps.
/// Coefficients are indexed by signed mode m + n/2, m = -n/2 .. n/2 - 1, with
/// u_m = (1/n) sum_j u_j exp(-i k_m x_j), x_j = -L + j 2L/n.
class Burgers {
 public:
  Burgers(int n, double L) : n_(n), L_(L) {}

  std::vector<cplx> forward(const std::vector<double>& u) const {
    std::vector<cplx> c(n_);
    for (int m = -n_ / 2; m < n_ / 2; ++m) {
      cplx s{};
      for (int j = 0; j < n_; ++j) s += u[j] * std::polar(1.0, -k(m) * x(j));
      c[m + n_ / 2] = s / double(n_);
    }
    return c;
  }

  std::vector<double> backward(const std::vector<cplx>& c) const {
    std::vector<double> u(n_);
    for (int j = 0; j < n_; ++j) {
      cplx s{};
      for (int m = -n_ / 2; m < n_ / 2; ++m) s += c[m + n_ / 2] * std::polar(1.0, k(m) * x(j));
      u[j] = s.real();
    }
    return u;
  }

  std::vector<cplx> rhs(const std::vector<cplx>& c) const {
    std::vector<cplx> f = c;
    for (int m = -n_ / 2; m < n_ / 2; ++m)
      if (3 * std::abs(m) >= n_) f[m + n_ / 2] = 0.0;
    auto u = backward(f);
    for (auto& v : u) v *= v;
    const auto w = forward(u);
    std::vector<cplx> out(n_);
    for (int m = -n_ / 2; m < n_ / 2; ++m) {
      const int i = m + n_ / 2;
      const cplx nl = 3 * std::abs(m) >= n_ ? cplx{} : -0.5 * cplx(0.0, k(m)) * w[i];
      out[i] = -k(m) * k(m) * c[i] + nl;
    }
    return out;
  }

  std::vector<cplx> step(std::vector<cplx> c, double dt, int substeps) const {
    const double h = dt / substeps;
    auto axpy = [](const std::vector<cplx>& a, const std::vector<cplx>& b, double s) {
      std::vector<cplx> r(a.size());
      for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + s * b[i];
      return r;
    };
    for (int s = 0; s < substeps; ++s) {
      const auto k1 = rhs(c);
      const auto k2 = rhs(axpy(c, k1, 0.5 * h));
      const auto k3 = rhs(axpy(c, k2, 0.5 * h));
      const auto k4 = rhs(axpy(c, k3, h));
      for (std::size_t i = 0; i < c.size(); ++i) c[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return c;
  }

  double k(int m) const { return std::numbers::pi * m / L_; }
  double x(int j) const { return -L_ + j * 2.0 * L_ / n_; }

 private:
  int n_;
  double L_;
};

}  // namespace oracle
