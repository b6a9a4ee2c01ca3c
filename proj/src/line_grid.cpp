#include "fowler/line_grid.hpp"

#include <algorithm>
#include <cmath>

#include "fowler/errors.hpp"
#include "fowler/quadrature.hpp"

namespace fowler {

namespace {

constexpr int kSubstitutionPoints = 64;
constexpr int kCellPoints = 6;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int stencil_start(int cell, int n) { return std::clamp(cell - 2, 0, n - 6); }

// Lagrange weights at cell-relative position u for the stencil of `cell`.
std::array<double, 6> cell_lagrange(int cell, int n, double u) {
  const int s0 = stencil_start(cell, n);
  std::array<double, 6> nodes, w;
  for (int m = 0; m < 6; ++m) nodes[m] = s0 + m - cell;
  lagrange_weights(nodes, u, w);
  return w;
}

// Weights of dx \int_{u0}^{u1} ((d - u) dx)^{-4/3} phi(x_cell + u dx) du on the stencil of `cell`.
std::array<double, 6> cell_integral(int cell, int n, double d, double u0, double u1, double dx) {
  const auto& rule = gauss_legendre(kCellPoints);
  std::array<double, 6> out{};
  const double half = 0.5 * (u1 - u0), mid = 0.5 * (u0 + u1);
  for (int g = 0; g < rule.size(); ++g) {
    const double u = mid + half * rule.nodes[g];
    const double kern = half * rule.weights[g] * std::pow((d - u) * dx, -4.0 / 3.0) * dx;
    const auto w = cell_lagrange(cell, n, u);
    for (int m = 0; m < 6; ++m) out[m] += kern * w[m];
  }
  return out;
}

}  // namespace

LineGrid::LineGrid(int n, double half_length) : n_(n), half_length_(half_length) {
  if (n < 16) throw DomainError("LineGrid: need at least 16 points");
  if (!(half_length > 0.0)) throw DomainError("LineGrid: half length must be positive");
}

std::vector<double> LineGrid::points() const {
  std::vector<double> xs(n_);
  for (int j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::vector<double> LineGrid::trapezoid_weights() const {
  std::vector<double> w(n_, dx());
  w.front() *= 0.5;
  w.back() *= 0.5;
  return w;
}

double trapezoid(const LineGrid& grid, std::span<const double> v) {
  if (static_cast<int>(v.size()) != grid.n()) throw ShapeError("trapezoid: length does not match grid");
  double s = 0.5 * (v.front() + v.back());
  for (int j = 1; j + 1 < grid.n(); ++j) s += v[j];
  return s * grid.dx();
}

InterpStencil interpolation_stencil(const LineGrid& grid, double y) {
  const int n = grid.n();
  const double q = (y + grid.half_length()) / grid.dx();
  const int cell = std::clamp(static_cast<int>(std::floor(q)), 0, n - 2);
  InterpStencil st;
  st.start = stencil_start(cell, n);
  std::array<double, 6> nodes;
  for (int m = 0; m < 6; ++m) nodes[m] = st.start + m;
  lagrange_weights(nodes, q, st.w);
  return st;
}

FiniteDifference::FiniteDifference(const LineGrid& grid) : n_(grid.n()), start_(grid.n()), w_(grid.n()) {
  const double inv = 1.0 / grid.dx();
  for (int j = 0; j < n_; ++j) {
    const int s0 = std::clamp(j - 3, 0, n_ - 7);
    std::array<double, 7> nodes;
    for (int m = 0; m < 7; ++m) nodes[m] = s0 + m;
    const auto w = fornberg_weights(j, nodes, 1);
    start_[j] = s0;
    for (int m = 0; m < 7; ++m) w_[j][m] = w[m] * inv;
  }
}

std::vector<double> FiniteDifference::apply(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != n_) throw ShapeError("FiniteDifference: length does not match grid");
  std::vector<double> out(n_);
  for (int j = 0; j < n_; ++j) {
    double s = 0.0;
    for (int m = 0; m < 7; ++m) s += w_[j][m] * v[start_[j] + m];
    out[j] = s;
  }
  return out;
}

std::vector<double> FiniteDifference::apply_transpose(std::span<const double> v) const {
  if (static_cast<int>(v.size()) != n_) throw ShapeError("FiniteDifference: length does not match grid");
  std::vector<double> out(n_, 0.0);
  for (int j = 0; j < n_; ++j)
    for (int m = 0; m < 7; ++m) out[start_[j] + m] += w_[j][m] * v[j];
  return out;
}

void FiniteDifference::add_to(Eigen::MatrixXd& M, double scale) const {
  for (int j = 0; j < n_; ++j)
    for (int m = 0; m < 7; ++m) M(j, start_[j] + m) += scale * w_[j][m];
}

NonlocalOperator::NonlocalOperator(const LineGrid& grid) : grid_(grid) {
  const int n = grid.n();
  const double dx = grid.dx(), L = grid.half_length();
  if (dx > 0.5) throw DomainError("NonlocalOperator: grid spacing must not exceed 1/2");
  const FiniteDifference fd(grid);
  RowMatrix R = RowMatrix::Zero(n, n);
  b_ = Eigen::VectorXd::Zero(n);

  // \int_0^1 3 s phi'(x - s^3) ds: interpolated FD derivative, then composed with D.
  const auto& srule = gauss_legendre(kSubstitutionPoints);
  std::vector<double> acc(n, 0.0);
  for (int i = 0; i < n; ++i) {
    int lo = n, hi = -1;
    for (int g = 0; g < srule.size(); ++g) {
      const double s = 0.5 * (srule.nodes[g] + 1.0);
      const double y = grid.x(i) - s * s * s;
      if (y < -L) continue;  // phi' vanishes left of the grid
      const auto st = interpolation_stencil(grid, y);
      const double c = 0.5 * srule.weights[g] * 3.0 * s;
      for (int m = 0; m < 6; ++m) acc[st.start + m] += c * st.w[m];
      lo = std::min(lo, st.start);
      hi = std::max(hi, st.start + 5);
    }
    for (int k = lo; k <= hi; ++k) {
      if (acc[k] == 0.0) continue;
      const int s0 = fd.start(k);
      const auto& w = fd.weights(k);
      for (int m = 0; m < 7; ++m) R(i, s0 + m) += acc[k] * w[m];
      acc[k] = 0.0;
    }
  }

  // phi(x - 1) and -(1/3) \int_{-inf}^{x-1} (x - y)^{-4/3} phi(y) dy.
  const int p = static_cast<int>(std::floor(1.0 / dx + 1e-12));
  double r = 1.0 - p * dx;
  if (r < 1e-12 * dx) r = 0.0;
  // Lag table for cells whose stencil is centred (2 <= cell <= n - 4).
  std::vector<std::array<double, 6>> table(n + 1);
  for (int d = p + 1; d <= n; ++d) table[d] = cell_integral(2, n, d, 0.0, 1.0, dx);
  for (int i = 0; i < n; ++i) {
    const double xi = grid.x(i);
    const double ystar = xi - 1.0;
    const bool off_grid = (i - p < 0) || (i - p == 0 && r > 0.0);
    if (off_grid) continue;  // shift term +phi_L and whole tail -phi_L cancel
    const auto st = interpolation_stencil(grid, ystar);
    for (int m = 0; m < 6; ++m) R(i, st.start + m) += st.w[m];
    const int last_full = r > 0.0 ? i - p - 2 : i - p - 1;
    for (int k = 0; k <= last_full; ++k) {
      const int d = i - k;
      const auto w = (k >= 2 && k <= n - 4) ? table[d] : cell_integral(k, n, d, 0.0, 1.0, dx);
      const int s0 = stencil_start(k, n);
      for (int m = 0; m < 6; ++m) R(i, s0 + m) -= w[m] / 3.0;
    }
    if (r > 0.0) {
      const int k = i - p - 1;
      const auto w = cell_integral(k, n, i - k, 0.0, 1.0 - r / dx, dx);
      const int s0 = stencil_start(k, n);
      for (int m = 0; m < 6; ++m) R(i, s0 + m) -= w[m] / 3.0;
    }
    b_[i] -= std::pow(xi + L, -1.0 / 3.0);
  }
  W_ = R;
}

std::vector<double> NonlocalOperator::apply(std::span<const double> phi, double phi_left) const {
  const int n = grid_.n();
  if (static_cast<int>(phi.size()) != n) throw ShapeError("NonlocalOperator: length does not match grid");
  const Eigen::Map<const Eigen::VectorXd> v(phi.data(), n);
  const Eigen::VectorXd out = W_ * v + phi_left * b_;
  return {out.data(), out.data() + n};
}

}  // namespace fowler
