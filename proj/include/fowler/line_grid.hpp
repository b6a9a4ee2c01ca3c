#pragma once

// Non-periodic profiles on a truncated line [-L, L] (both end points included), with
// finite-difference derivatives and the nonlocal operator
//
//   g[phi](x) = \int_0^1 xi^{-1/3} phi'(x - xi) dxi + phi(x - 1)
//               - (1/3) \int_1^inf xi^{-4/3} phi(x - xi) dxi,
//
// assembled as a dense matrix. Values left of the grid are the constant phi_L.

#include <array>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fowler {

class LineGrid {
 public:
  /// Throws DomainError unless n >= 16 and L > 0.
  LineGrid(int n, double half_length);

  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double dx() const { return 2.0 * half_length_ / (n_ - 1); }
  double x(int j) const { return j == n_ - 1 ? half_length_ : -half_length_ + j * dx(); }
  std::vector<double> points() const;
  /// Trapezoid weights of the grid.
  std::vector<double> trapezoid_weights() const;

  bool operator==(const LineGrid& o) const { return n_ == o.n_ && half_length_ == o.half_length_; }

 private:
  int n_;
  double half_length_;
};

double trapezoid(const LineGrid& grid, std::span<const double> v);

/// Six-point Lagrange stencil at an arbitrary y in [-L, L].
struct InterpStencil {
  int start = 0;
  std::array<double, 6> w{};
};
InterpStencil interpolation_stencil(const LineGrid& grid, double y);

/// Sixth-order first derivative: central 7-point stencil inside, one-sided 7-point
/// stencils in the three rows next to each end.
class FiniteDifference {
 public:
  explicit FiniteDifference(const LineGrid& grid);

  std::vector<double> apply(std::span<const double> v) const;
  /// D^T v.
  std::vector<double> apply_transpose(std::span<const double> v) const;
  /// M += scale * D on the leading n x n block.
  void add_to(Eigen::MatrixXd& M, double scale) const;

  int start(int row) const { return start_[row]; }
  const std::array<double, 7>& weights(int row) const { return w_[row]; }

 private:
  int n_;
  std::vector<int> start_;
  std::vector<std::array<double, 7>> w_;
};

/// g[phi] = W phi + phi_L b on the grid.
class NonlocalOperator {
 public:
  explicit NonlocalOperator(const LineGrid& grid);

  std::vector<double> apply(std::span<const double> phi, double phi_left) const;
  const Eigen::MatrixXd& matrix() const { return W_; }
  const Eigen::VectorXd& left_vector() const { return b_; }
  const LineGrid& grid() const { return grid_; }

 private:
  LineGrid grid_;
  Eigen::MatrixXd W_;
  Eigen::VectorXd b_;
};

}  // namespace fowler
