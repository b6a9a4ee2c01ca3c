#include "fowler/wave.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fowler/errors.hpp"
#include "fowler/quadrature.hpp"
#include "fowler/spectral.hpp"
#include "fowler/symbols.hpp"

namespace fowler {

namespace {

double sup_abs(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s = std::max(s, std::abs(x));
  return s;
}

template <class F>
std::vector<double> sample(const LineGrid& grid, F&& f) {
  std::vector<double> v(grid.n());
  for (int j = 0; j < grid.n(); ++j) v[j] = f(grid.x(j));
  return v;
}

double sech2(double z) {
  const double s = 1.0 / std::cosh(z);
  return s * s;
}

}  // namespace

double ProfileFamily::g(double x) const { return c * (1.0 - std::tanh(0.5 * c * x)); }
double ProfileFamily::h(double x) const { return -0.5 * c * c * sech2(0.5 * c * x); }
double ProfileFamily::h_prime(double x) const {
  return 0.5 * c * c * c * sech2(0.5 * c * x) * std::tanh(0.5 * c * x);
}
double ProfileFamily::tau(double x) const { return c * std::tanh(0.5 * c * x); }
double ProfileFamily::l(double x) const { return sech2(0.5 * c * x); }
double ProfileFamily::l_prime(double x) const { return -c * sech2(0.5 * c * x) * std::tanh(0.5 * c * x); }

std::vector<double> ProfileFamily::sample_g(const LineGrid& grid) const { return sample(grid, [&](double x) { return g(x); }); }
std::vector<double> ProfileFamily::sample_h(const LineGrid& grid) const { return sample(grid, [&](double x) { return h(x); }); }
std::vector<double> ProfileFamily::sample_h_prime(const LineGrid& grid) const {
  return sample(grid, [&](double x) { return h_prime(x); });
}
std::vector<double> ProfileFamily::sample_tau(const LineGrid& grid) const { return sample(grid, [&](double x) { return tau(x); }); }
std::vector<double> ProfileFamily::sample_l(const LineGrid& grid) const { return sample(grid, [&](double x) { return l(x); }); }

double exact_wave_eta0(double d, double x) {
  if (d == 0.0) throw DomainError("exact_wave_eta0: d = 0 gives the zero state");
  return 0.5 * d * (1.0 - std::tanh(0.25 * d * x));
}

std::vector<double> exact_wave_eta0(double d, const LineGrid& grid) {
  if (d == 0.0) throw DomainError("exact_wave_eta0: d = 0 gives the zero state");
  return sample(grid, [d](double x) { return exact_wave_eta0(d, x); });
}

LineGrid default_line_grid(double c, int n) {
  if (!(c > 0.0)) throw DomainError("default_line_grid: c must be positive");
  return LineGrid(n, 60.0 / c);
}

std::vector<double> travelling_residual(const NonlocalOperator& op, std::span<const double> u, double c, double eta,
                                        double u_left, double u_right) {
  const FiniteDifference fd(op.grid());
  return travelling_residual(op, u, fd.apply(u), c, eta, u_left, u_right);
}

std::vector<double> travelling_residual(const NonlocalOperator& op, std::span<const double> u,
                                        std::span<const double> du, double c, double eta, double u_left,
                                        double u_right) {
  const auto& grid = op.grid();
  if (u.size() != du.size() || static_cast<int>(u.size()) != grid.n())
    throw ShapeError("travelling_residual: length does not match grid");
  std::vector<double> gu;
  if (eta != 0.0) gu = op.apply(u, u_left);
  const double flux_right = c * u_right - 0.5 * u_right * u_right;
  std::vector<double> out(grid.n());
  for (int j = 0; j < grid.n(); ++j) {
    out[j] = c * u[j] - 0.5 * u[j] * u[j] + du[j] - flux_right;
    if (eta != 0.0) out[j] -= eta * gu[j];
  }
  return out;
}

WaveSolver::WaveSolver(double c) : WaveSolver(c, default_line_grid(c)) {}

WaveSolver::WaveSolver(double c, const LineGrid& grid)
    : family_{c}, grid_(grid), fd_(grid), op_(std::make_shared<NonlocalOperator>(grid)) {
  if (!(c > 0.0)) throw DomainError("WaveSolver: c must be positive");
  gc_ = family_.sample_g(grid_);
  tau_ = family_.sample_tau(grid_);
  g_gc_ = op_->apply(gc_, 2.0 * c);
  auto weighted = family_.sample_h_prime(grid_);
  const auto w = grid_.trapezoid_weights();
  for (int j = 0; j < grid_.n(); ++j) weighted[j] *= w[j];
  phase_row_ = fd_.apply_transpose(weighted);
}

std::vector<double> WaveSolver::G(double eta, std::span<const double> phi) const {
  const int n = grid_.n();
  if (static_cast<int>(phi.size()) != n) throw ShapeError("G: length does not match grid");
  auto out = fd_.apply(phi);
  std::vector<double> gphi;
  if (eta != 0.0) gphi = op_->apply(phi, 0.0);
  for (int j = 0; j < n; ++j) {
    out[j] += tau_[j] * phi[j] - 0.5 * phi[j] * phi[j];
    if (eta != 0.0) out[j] -= eta * (gphi[j] + g_gc_[j]);
  }
  return out;
}

std::vector<double> WaveSolver::jacobian_apply(double eta, std::span<const double> phi, std::span<const double> v) const {
  const int n = grid_.n();
  if (static_cast<int>(phi.size()) != n || static_cast<int>(v.size()) != n)
    throw ShapeError("jacobian_apply: length does not match grid");
  auto out = fd_.apply(v);
  std::vector<double> gv;
  if (eta != 0.0) gv = op_->apply(v, 0.0);
  for (int j = 0; j < n; ++j) {
    out[j] += (tau_[j] - phi[j]) * v[j];
    if (eta != 0.0) out[j] -= eta * gv[j];
  }
  return out;
}

Eigen::MatrixXd WaveSolver::jacobian(double eta, std::span<const double> phi) const {
  const int n = grid_.n();
  Eigen::MatrixXd J = -eta * op_->matrix();
  for (int j = 0; j < n; ++j) J(j, j) += tau_[j] - phi[j];
  fd_.add_to(J, 1.0);
  return J;
}

double WaveSolver::phase_defect(std::span<const double> phi) const {
  double s = 0.0;
  for (int j = 0; j < grid_.n(); ++j) s += phase_row_[j] * phi[j];
  return s;
}

std::vector<double> WaveSolver::invert_base_linearization(std::span<const double> y) const {
  const int n = grid_.n();
  if (static_cast<int>(y.size()) != n) throw ShapeError("invert_base_linearization: length does not match grid");
  const double c = family_.c;
  const auto& rule = gauss_legendre(8);
  // \int_a^b y(s) cosh^2(c s / 2) ds with y interpolated on the grid.
  auto segment = [&](double a, double b) {
    if (a == b) return 0.0;
    const auto st = interpolation_stencil(grid_, 0.5 * (a + b));
    const double q0 = st.start;
    std::array<double, 6> nodes;
    for (int m = 0; m < 6; ++m) nodes[m] = q0 + m;
    double sum = 0.0;
    const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
    for (int g = 0; g < rule.size(); ++g) {
      const double s = mid + half * rule.nodes[g];
      std::array<double, 6> w;
      lagrange_weights(nodes, (s + grid_.half_length()) / grid_.dx(), w);
      double ys = 0.0;
      for (int m = 0; m < 6; ++m) ys += w[m] * y[st.start + m];
      const double ch = std::cosh(0.5 * c * s);
      sum += rule.weights[g] * ys * ch * ch;
    }
    return half * sum;
  };
  // I(x_j) = \int_0^{x_j}, marching outward from the point nearest 0.
  std::vector<double> I(n);
  int j0 = static_cast<int>(std::lround(grid_.half_length() / grid_.dx()));
  j0 = std::clamp(j0, 0, n - 1);
  I[j0] = segment(0.0, grid_.x(j0));
  for (int j = j0 + 1; j < n; ++j) I[j] = I[j - 1] + segment(grid_.x(j - 1), grid_.x(j));
  for (int j = j0 - 1; j >= 0; --j) I[j] = I[j + 1] - segment(grid_.x(j), grid_.x(j + 1));

  const auto l = family_.sample_l(grid_);
  const auto hp = family_.sample_h_prime(grid_);
  // lambda \int l' h' + \int (l' I + y) h' = 0, since (l I)' = l' I + y.
  std::vector<double> a(n), b(n);
  for (int j = 0; j < n; ++j) {
    const double lp = family_.l_prime(grid_.x(j));
    a[j] = lp * hp[j];
    b[j] = (lp * I[j] + y[j]) * hp[j];
  }
  const double lambda = -trapezoid(grid_, b) / trapezoid(grid_, a);
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) g[j] = lambda * l[j] + l[j] * I[j];
  return g;
}

std::vector<double> WaveSolver::linear_response() const { return invert_base_linearization(g_gc_); }

const std::vector<double>& WaveSolver::bordering_column() const {
  if (!border_.empty()) return border_;
  // Central differences leave a sawtooth near-null vector of J0^T; bordering with it keeps
  // the extended matrix well conditioned. Inverse iteration from a generic start.
  const int n = grid_.n();
  const std::vector<double> zero(n, 0.0);
  const Eigen::MatrixXd J0T = jacobian(0.0, zero).transpose();
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(J0T);
  Eigen::VectorXd v(n);
  for (int j = 0; j < n; ++j) v[j] = std::sin(1.618033988749895 * (j + 1)) + (j % 2 == 0 ? 1.0 : -1.0);
  for (int it = 0; it < 4; ++it) {
    v = lu.solve(v);
    v /= v.cwiseAbs().maxCoeff();
  }
  if (!v.allFinite()) throw SingularMatrixError("bordering column: inverse iteration failed");
  border_.assign(v.data(), v.data() + n);
  return border_;
}

WaveState WaveSolver::make_state(double eta, std::vector<double> phi) const {
  WaveState s;
  s.grid = grid_;
  s.c = family_.c;
  s.eta = eta;
  s.full_wave.resize(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) s.full_wave[j] = gc_[j] + phi[j];
  s.residual_norm = sup_abs(G(eta, phi));
  s.phase_defect = phase_defect(phi);
  s.phi = std::move(phi);
  return s;
}

WaveState WaveSolver::newton(double eta) const { return newton(eta, std::vector<double>(grid_.n(), 0.0)); }

WaveState WaveSolver::newton(double eta, std::span<const double> phi0, int max_iter, double tol) const {
  const int n = grid_.n();
  if (static_cast<int>(phi0.size()) != n) throw ShapeError("newton: initial guess does not match grid");
  std::vector<double> phi(phi0.begin(), phi0.end());
  std::vector<double> history;
  int it = 0;
  bool converged = false;
  for (;; ++it) {
    const auto g = G(eta, phi);
    const double res = sup_abs(g);
    history.push_back(res);
    if (res < tol) {
      converged = true;
      break;
    }
    if (it == max_iter || !std::isfinite(res)) break;
    Eigen::MatrixXd M(n + 1, n + 1);
    M.topLeftCorner(n, n) = jacobian(eta, phi);
    const auto& r = bordering_column();
    for (int j = 0; j < n; ++j) {
      M(j, n) = r[j];
      M(n, j) = phase_row_[j];
    }
    M(n, n) = 0.0;
    Eigen::VectorXd rhs(n + 1);
    for (int j = 0; j < n; ++j) rhs[j] = -g[j];
    rhs[n] = -phase_defect(phi);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(M);
    const Eigen::VectorXd step = lu.solve(rhs);
    if (!step.allFinite() || lu.rcond() < 1e-15)
      throw SingularMatrixError("newton: bordered Jacobian is numerically singular");
    for (int j = 0; j < n; ++j) phi[j] += step[j];
  }
  WaveState s = make_state(eta, std::move(phi));
  s.iterations = it;
  s.converged = converged;
  s.residual_history = std::move(history);
  return s;
}

ContinuationResult WaveSolver::continue_in_eta(double eta_target, int steps) const {
  if (steps < 1) throw DomainError("continue_in_eta: steps must be at least 1");
  ContinuationResult out;
  out.states.push_back(newton(0.0));
  if (eta_target == 0.0) return out;
  for (int k = 1; k <= steps; ++k) {
    const double eta = eta_target * k / steps;
    WaveState s = newton(eta, out.states.back().phi);
    if (!s.converged) {
      if (k == 1) throw FowlerError("continue_in_eta: Newton failed at the first step");
      out.halted = true;
      break;
    }
    out.last_converged_eta = eta;
    out.states.push_back(std::move(s));
  }
  return out;
}

WaveState rescale_wave(const WaveState& state, double lambda) {
  if (!(lambda > 0.0)) throw DomainError("rescale_wave: lambda must be positive");
  const LineGrid grid(state.grid.n(), lambda * state.grid.half_length());
  const double c = state.c / lambda;
  const double eta = state.eta / std::pow(lambda, 2.0 / 3.0);
  std::vector<double> phi(state.phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) phi[j] = state.phi[j] / lambda;
  const WaveSolver solver(c, grid);
  auto g = solver.G(eta, phi);
  WaveState s = state;
  s.grid = grid;
  s.c = c;
  s.eta = eta;
  s.full_wave.resize(phi.size());
  for (std::size_t j = 0; j < phi.size(); ++j) s.full_wave[j] = solver.g_c()[j] + phi[j];
  s.residual_norm = sup_abs(g);
  s.phase_defect = solver.phase_defect(phi);
  s.phi = std::move(phi);
  return s;
}

ShiftedWave galilean_shift(const WaveState& state, double k) {
  ShiftedWave w;
  w.grid = state.grid;
  w.c = state.c + k;
  w.eta = state.eta;
  w.u_left = 2.0 * state.c + k;
  w.u_right = k;
  w.u = state.full_wave;
  for (double& v : w.u) v += k;
  const NonlocalOperator op(state.grid);
  // u' = g_c' exactly plus the differenced perturbation
  const ProfileFamily fam{state.c};
  auto du = fam.sample_h(state.grid);
  const auto dphi = FiniteDifference(state.grid).apply(state.phi);
  for (std::size_t j = 0; j < du.size(); ++j) du[j] += dphi[j];
  w.residual_norm = sup_abs(travelling_residual(op, w.u, du, w.c, w.eta, w.u_left, w.u_right));
  return w;
}

SolitonReport soliton_identity(const LineGrid& grid, std::span<const double> profile, double eta) {
  const int n = grid.n();
  if (static_cast<int>(profile.size()) != n) throw ShapeError("soliton_identity: length does not match grid");
  const double sup = sup_abs(profile);
  SolitonReport rep;
  if (sup == 0.0) return rep;
  if (std::abs(profile.front()) > 1e-6 * sup || std::abs(profile.back()) > 1e-6 * sup)
    throw DomainError("soliton_identity: profile does not decay at the ends");
  int N = 1;
  while (N < 4 * n) N *= 2;
  const double dx = grid.dx();
  const Grid periodic(N, 0.5 * N * dx);
  std::vector<double> padded(N, 0.0);
  const int offset = (N - n) / 2;
  for (int j = 0; j < n; ++j) padded[offset + j] = profile[j];
  const SpectralField u = to_spectral(padded, periodic);
  const double a = fowler_constants().a;
  // |phi^(k_m)|^2 = (N dx)^2 |u_m|^2 / (2 pi), dk = 2 pi / (N dx).
  rep.integrand_min = INFINITY;
  double sum = 0.0;
  for (int i = 0; i < N; ++i) {
    if (i == periodic.nyquist_index()) continue;
    const double k = periodic.wavenumber(i);
    const double ak = std::abs(k);
    const double weight = k * k - eta * a * ak * std::cbrt(ak);
    const double integrand = weight * std::norm(u.coeffs[i]) * (N * dx) * (N * dx) / (2.0 * std::numbers::pi);
    rep.integrand_min = std::min(rep.integrand_min, integrand);
    sum += integrand;
  }
  rep.value = sum * 2.0 * std::numbers::pi / (N * dx);
  return rep;
}

}  // namespace fowler
