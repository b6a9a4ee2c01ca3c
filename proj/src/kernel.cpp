#include "fowler/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "fowler/errors.hpp"
#include "fowler/quadrature.hpp"
#include "fowler/symbols.hpp"

namespace fowler {

namespace {

constexpr int kGaussPoints = 20;
constexpr double kPanelPhase = 6.0;  // max phase change across one Gauss panel
constexpr int kMaxRefine = 16;
constexpr int kReseedEvery = 256;

// Weighted nodes of \int_0^Xi f(xi) (.) dxi. The first panel [0, min(1, Xi)] uses
// xi = s^3, which removes the |xi|^{4/3} non-smoothness at the origin.
struct NodeSet {
  std::vector<double> xi;
  std::vector<cplx> fw;  // weight * f(xi)
};

NodeSet make_nodes(const std::function<cplx(double)>& f, double xi_max, double omega, int refine) {
  const auto& rule = gauss_legendre(kGaussPoints);
  NodeSet set;
  const double xi0 = std::min(1.0, xi_max);
  const double s_max = std::cbrt(xi0);
  const int head_panels = refine * (static_cast<int>(std::ceil(omega * xi0 / 2.0)) + 2);
  const double hs = s_max / head_panels;
  for (int p = 0; p < head_panels; ++p) {
    const double mid = (p + 0.5) * hs;
    for (int q = 0; q < rule.size(); ++q) {
      const double s = mid + 0.5 * hs * rule.nodes[q];
      const double xi = s * s * s;
      set.xi.push_back(xi);
      set.fw.push_back(0.5 * hs * rule.weights[q] * 3.0 * s * s * f(xi));
    }
  }
  if (xi_max > xi0) {
    const int body_panels = refine * (static_cast<int>(std::ceil(omega * (xi_max - xi0) / kPanelPhase)) + 2);
    const double h = (xi_max - xi0) / body_panels;
    for (int p = 0; p < body_panels; ++p) {
      const double mid = xi0 + (p + 0.5) * h;
      for (int q = 0; q < rule.size(); ++q) {
        const double xi = mid + 0.5 * h * rule.nodes[q];
        set.xi.push_back(xi);
        set.fw.push_back(0.5 * h * rule.weights[q] * f(xi));
      }
    }
  }
  return set;
}

// out[j]  = Re sum_q fw_q e^{i x_j xi_q},  dout[j] = Re sum_q i xi_q fw_q e^{i x_j xi_q}
// on x_j = x0 + j dx. The phase factors advance by one complex multiply per point and
// are reseeded periodically to bound drift.
void evaluate_uniform(const NodeSet& set, double x0, double dx, int n, std::vector<double>& out,
                      std::vector<double>* dout) {
  const std::size_t m = set.xi.size();
  std::vector<cplx> z(m), step(m);
  for (std::size_t q = 0; q < m; ++q) step[q] = std::polar(1.0, dx * set.xi[q]);
  out.assign(n, 0.0);
  if (dout) dout->assign(n, 0.0);
  for (int j = 0; j < n; ++j) {
    if (j % kReseedEvery == 0) {
      const double x = x0 + j * dx;
      for (std::size_t q = 0; q < m; ++q) z[q] = set.fw[q] * std::polar(1.0, x * set.xi[q]);
    }
    double v = 0.0, d = 0.0;
    for (std::size_t q = 0; q < m; ++q) {
      v += z[q].real();
      d -= set.xi[q] * z[q].imag();
      z[q] *= step[q];
    }
    out[j] = v;
    if (dout) (*dout)[j] = d;
  }
}

// Full-line inverse transform at one point including the negative half-line, used to
// measure the imaginary residue.
cplx full_line_point(const NodeSet& pos, const std::function<cplx(double)>& f_neg_over_f, double x) {
  cplx acc{};
  for (std::size_t q = 0; q < pos.xi.size(); ++q) {
    acc += pos.fw[q] * std::polar(1.0, x * pos.xi[q]);
    acc += pos.fw[q] * f_neg_over_f(pos.xi[q]) * std::polar(1.0, -x * pos.xi[q]);
  }
  return acc;
}

struct Inversion {
  std::vector<double> values;
  std::vector<double> derivative;
  double achieved = 0.0;
  double imag_residue = 0.0;
};

// scale * 2 Re \int_0^Xi f(xi) e^{i x xi} dxi on a uniform grid with refinement check.
Inversion invert_hermitian(const std::function<cplx(double)>& f, double xi_max, double omega_extra, double x0,
                           double dx, int n, double scale, double tol, bool want_derivative) {
  const double xmax = std::max(std::abs(x0), std::abs(x0 + (n - 1) * dx));
  const double omega = xmax + omega_extra + 1.0;
  // Refinement check on a subsample of the grid.
  const int stride = std::max(1, n / 64);
  const int n_sub = (n - 1) / stride + 1;
  int refine = 1;
  NodeSet coarse = make_nodes(f, xi_max, omega, refine);
  std::vector<double> sub_coarse, sub_fine;
  evaluate_uniform(coarse, x0, dx * stride, n_sub, sub_coarse, nullptr);
  double achieved = 0.0;
  NodeSet fine;
  for (;;) {
    fine = make_nodes(f, xi_max, omega, 2 * refine);
    evaluate_uniform(fine, x0, dx * stride, n_sub, sub_fine, nullptr);
    double diff = 0.0, mag = 0.0;
    for (int j = 0; j < n_sub; ++j) {
      diff = std::max(diff, std::abs(sub_fine[j] - sub_coarse[j]));
      mag = std::max(mag, std::abs(sub_fine[j]));
    }
    achieved = 2.0 * scale * diff / std::max(1.0, 2.0 * scale * mag);
    if (achieved <= tol) break;
    refine *= 2;
    if (refine >= kMaxRefine) throw QuadratureError("frequency quadrature did not settle", achieved);
    coarse = std::move(fine);
    sub_coarse = sub_fine;
  }
  Inversion inv;
  evaluate_uniform(fine, x0, dx, n, inv.values, want_derivative ? &inv.derivative : nullptr);
  for (auto& v : inv.values) v *= 2.0 * scale;
  for (auto& v : inv.derivative) v *= 2.0 * scale;
  inv.achieved = achieved;
  // Imaginary residue at a handful of points, from the explicit negative half-line.
  auto ratio = [&](double xi) {
    const cplx fp = f(xi);
    const cplx fn = std::conj(fp);  // Hermitian symbol: f(-xi) = conj f(xi)
    return std::abs(fp) > 0.0 ? fn / fp : cplx{0.0, 0.0};
  };
  for (int j = 0; j < n; j += std::max(1, n / 8)) {
    const cplx v = scale * full_line_point(fine, ratio, x0 + j * dx);
    inv.imag_residue = std::max(inv.imag_residue, std::abs(v.imag()));
  }
  return inv;
}

// Far-field series of the inverse transform of exp(p (i xi)^2 + q (i xi)^{4/3}):
//   sum_{j>=1, m>=0} q^j/j! p^m/m! * amp * x^{-beta-1} / Gamma(-beta),   beta = 4j/3 + 2m,
// with amp * x^{-beta-1}/Gamma(-beta) the inverse transform of (i xi)^beta.
// mode 0: value, 1: x-derivative, -1: \int_x^inf.
double far_series(double x, double p, double q, double amp, int mode) {
  constexpr double kBetaMax = 40.0;
  double sum = 0.0;
  const double lx = std::log(x);
  for (int j = 1; 4.0 * j / 3.0 <= kBetaMax; ++j) {
    for (int m = 0;; ++m) {
      const double beta = 4.0 * j / 3.0 + 2.0 * m;
      if (beta > kBetaMax) break;
      const double sin_pb = std::sin(std::numbers::pi * beta);
      if (j % 3 == 0 && std::abs(sin_pb) < 1e-12) continue;  // integer beta: local term
      // 1/Gamma(-beta) = -Gamma(1+beta) sin(pi beta) / pi
      double log_mag = j * std::log(std::abs(q)) - std::lgamma(j + 1.0) + std::lgamma(1.0 + beta);
      double sign = ((q < 0.0 && j % 2 == 1) ? -1.0 : 1.0) * (-sin_pb / std::numbers::pi);
      if (m > 0) {
        if (p == 0.0) break;
        log_mag += m * std::log(std::abs(p)) - std::lgamma(m + 1.0);
        if (p < 0.0 && m % 2 == 1) sign = -sign;
      }
      double term;
      if (mode == 0) {
        term = std::exp(log_mag - (beta + 1.0) * lx);
      } else if (mode == 1) {
        term = -(beta + 1.0) * std::exp(log_mag - (beta + 2.0) * lx);
      } else {
        term = std::exp(log_mag - beta * lx) / beta;
      }
      sum += sign * term;
    }
  }
  return amp * sum;
}

double kernel_series(double x, double t, int mode) {
  return far_series(x, t, -t * kGammaTwoThirds, std::sqrt(2.0 * std::numbers::pi), mode);
}

double fractional_series(double y, double s, int mode) { return far_series(y, 0.0, s * kGammaTwoThirds, 1.0, mode); }

double trapezoid(const std::vector<double>& v, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += (j == 0 || j + 1 == v.size()) ? 0.5 * v[j] : v[j];
  return s * dx;
}

double trapezoid_abs(const std::vector<double>& v, double dx) {
  double s = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) s += ((j == 0 || j + 1 == v.size()) ? 0.5 : 1.0) * std::abs(v[j]);
  return s * dx;
}

double kernel_omega_extra(double t, double xi_max) {
  const auto k = fowler_constants();
  return 4.0 / 3.0 * t * std::abs(k.b) * std::cbrt(xi_max) + 2.0 * t * xi_max;
}

double fractional_cutoff(double s, double tol) {
  return std::pow(std::log(1.0 / tol) / (s * fowler_constants().a), 0.75);
}

std::vector<double> fractional_on_lattice(double s, double y0, double dy, int n, double xi_max, double tol) {
  const auto k = fowler_constants();
  auto f = [s](double xi) { return std::exp(-s * xi * std::cbrt(xi) * phi_symbol(xi)); };
  const double extra = 4.0 / 3.0 * s * std::abs(k.b) * std::cbrt(xi_max) + 1.0;
  return invert_hermitian(f, xi_max, extra, y0, dy, n, 1.0 / (2.0 * std::numbers::pi), tol, false).values;
}

}  // namespace

SpectralField apply_semigroup(double t, const SpectralField& u, double eta) {
  if (t < 0.0) throw DomainError("apply_semigroup: t must be nonnegative");
  SpectralField out = u;
  if (t == 0.0) return out;
  const int n = u.grid.n();
  const int nyq = u.grid.nyquist_index();
  for (int i = 0; i < n; ++i) {
    const double k = u.grid.wavenumber(i);
    if (i == nyq) {
      out.coeffs[i] *= std::exp(t * linear_symbol(k, eta).real());
    } else {
      out.coeffs[i] *= semigroup_symbol(k, t, eta);
    }
  }
  return out;
}

double truncation_frequency(double t, double tol) {
  const double split = std::pow(2.0 * fowler_constants().a, 1.5);
  return std::max(split, std::sqrt(2.0 * std::log(1.0 / tol) / t));
}

KernelSample kernel_realize(double t, double X, int n_pts, double quad_tol) {
  if (!(t > 0.0)) throw DomainError("kernel_realize: t must be positive");
  if (!(X > 0.0) || n_pts < 3) throw DomainError("kernel_realize: need X > 0 and at least 3 points");
  const double xi_max = truncation_frequency(t, quad_tol);
  const double dx = 2.0 * X / (n_pts - 1);
  auto f = [t](double xi) { return semigroup_symbol(xi, t); };
  auto inv = invert_hermitian(f, xi_max, kernel_omega_extra(t, xi_max), -X, dx, n_pts,
                              1.0 / std::sqrt(2.0 * std::numbers::pi), quad_tol, true);
  KernelSample s;
  s.t = t;
  s.xs.resize(n_pts);
  for (int j = 0; j < n_pts; ++j) s.xs[j] = -X + j * dx;
  s.xs[n_pts - 1] = X;
  s.values = std::move(inv.values);
  s.derivative = std::move(inv.derivative);
  s.quad_tol = quad_tol;
  s.achieved_tol = inv.achieved;
  s.imag_residue = inv.imag_residue;
  return s;
}

double kernel_value(double x, double t, double quad_tol) {
  if (!(t > 0.0)) throw DomainError("kernel_value: t must be positive");
  const double xi_max = truncation_frequency(t, quad_tol);
  auto f = [t](double xi) { return semigroup_symbol(xi, t); };
  return invert_hermitian(f, xi_max, kernel_omega_extra(t, xi_max), x, 1.0, 1,
                          1.0 / std::sqrt(2.0 * std::numbers::pi), quad_tol, false)
      .values[0];
}

double kernel_far_field(double x, double t) { return kernel_series(x, t, 0); }
double kernel_far_field_derivative(double x, double t) { return kernel_series(x, t, 1); }
double kernel_tail_mass(double X, double t) { return kernel_series(X, t, -1); }

KernelNorms kernel_norms(double t, double quad_tol) {
  if (!(t > 0.0)) throw DomainError("kernel_norms: t must be positive");
  KernelNorms out;
  out.t = t;
  const double X = 8.0 + 12.0 * std::sqrt(t);
  double dx = std::min(0.05, std::sqrt(t) / 16.0);
  KernelNorms prev;
  for (int level = 0; level < 5; ++level) {
    const int n = 2 * static_cast<int>(std::ceil(X / dx)) + 1;
    const double h = 2.0 * X / (n - 1);
    const auto s = kernel_realize(t, X, n, quad_tol);
    KernelNorms cur;
    cur.t = t;
    cur.window = X;
    cur.spacing = h;
    const double tail_far = kernel_far_field(X, t);
    cur.l1 = trapezoid_abs(s.values, h) + std::abs(kernel_tail_mass(X, t));
    cur.derivative_l1 = trapezoid_abs(s.derivative, h) + std::abs(tail_far);
    cur.mass = trapezoid(s.values, h) + kernel_tail_mass(X, t);
    cur.derivative_mass = trapezoid(s.derivative, h) - tail_far;
    const auto it = std::min_element(s.values.begin(), s.values.end());
    cur.min_value = *it;
    cur.argmin = s.xs[it - s.values.begin()];
    if (level > 0) {
      const double c1 = std::abs(cur.l1 - prev.l1) / cur.l1;
      const double c2 = std::abs(cur.derivative_l1 - prev.derivative_l1) / cur.derivative_l1;
      const double c3 = std::abs(cur.min_value - prev.min_value) / std::abs(cur.min_value);
      cur.refinement_change = std::max({c1, c2, c3});
      if (cur.refinement_change < 5e-4) return cur;
    }
    prev = cur;
    dx *= 0.5;
  }
  throw QuadratureError("kernel_norms: L1 norms did not converge under grid refinement", prev.refinement_change);
}

double kernel_l1(double t, double quad_tol) { return kernel_norms(t, quad_tol).l1; }
double kernel_derivative_l1(double t, double quad_tol) { return kernel_norms(t, quad_tol).derivative_l1; }

double envelope(EnvelopeKind kind, double t) {
  const double a = fowler_constants().a;
  const double growth = t * t * std::exp(4.0 / 27.0 * a * a * a * t);
  return (kind == EnvelopeKind::l1_kernel ? 1.0 : 1.0 / std::sqrt(t)) + growth;
}

double envelope_nu(double r) {
  const double a = fowler_constants().a;
  return r + r * r * std::exp(4.0 / 27.0 * a * a * a * r);
}

double envelope_mu(double r) {
  const double a = fowler_constants().a;
  return std::sqrt(r) + r * r * std::exp(4.0 / 27.0 * a * a * a * r);
}

std::vector<double> fractional_kernel_realize(double s, double Y, int n_pts, double quad_tol) {
  if (!(s > 0.0)) throw DomainError("fractional_kernel_realize: s must be positive");
  const double dy = 2.0 * Y / (n_pts - 1);
  return fractional_on_lattice(s, -Y, dy, n_pts, fractional_cutoff(s, quad_tol), quad_tol);
}

double fractional_kernel_l1(double s, double spacing, double quad_tol) {
  // G(y, s) = s^{-3/4} G(y s^{-3/4}, 1): the window scales with s^{3/4}.
  const double width = std::pow(s, 0.75);
  const double Y = 30.0 * width;
  const int n = 2 * static_cast<int>(std::ceil(Y / spacing)) + 1;
  const double dy = 2.0 * Y / (n - 1);
  const auto g = fractional_kernel_realize(s, Y, n, quad_tol);
  return trapezoid_abs(g, dy) + std::abs(fractional_series(Y, s, -1));
}

SelfSimilarReport selfsimilar_check(double t, double X, double spacing, double quad_tol) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("selfsimilar_check: t must lie in (0, 1)");
  SelfSimilarReport rep;
  rep.t = t;
  rep.spacing = spacing;
  const double s = 1.0 - std::cbrt(t);
  rep.g_envelope = std::pow(s, 0.75) + std::pow(s, -0.75);
  const double h = spacing;
  double xi_g = fractional_cutoff(s, quad_tol);
  const double nyquist = std::numbers::pi / h;
  if (xi_g > 0.5 * nyquist) {
    rep.resolved = false;
    xi_g = 0.5 * nyquist;
  }
  // Lattice y_j = j h; K(., 1) on |j| <= ny, G on |j| <= ny + nz.
  const double Y = 40.0;
  const int ny = static_cast<int>(std::ceil(Y / h));
  const int nz = static_cast<int>(std::ceil(X / std::sqrt(t) / h));
  const auto k1 = kernel_realize(1.0, ny * h, 2 * ny + 1, quad_tol).values;
  const int ng = ny + nz;
  const auto g = fractional_on_lattice(s, -ng * h, h, 2 * ng + 1, xi_g, quad_tol);
  const auto direct = kernel_realize(t, std::sqrt(t) * nz * h, 2 * nz + 1, quad_tol).values;
  const double inv_sqrt_t = 1.0 / std::sqrt(t);
  for (int i = -nz; i <= nz; ++i) {
    double conv = 0.0;
    for (int j = -ny; j <= ny; ++j) {
      const double w = (j == -ny || j == ny) ? 0.5 : 1.0;
      conv += w * k1[j + ny] * g[i - j + ng];
    }
    const double factorized = inv_sqrt_t * h * conv;
    rep.discrepancy = std::max(rep.discrepancy, std::abs(direct[i + nz] - factorized));
  }
  rep.g_l1 = fractional_kernel_l1(s, std::min(h, std::pow(s, 0.75) / 40.0), quad_tol);
  return rep;
}

}  // namespace fowler
