#pragma once

// Periodic truncation of the line: uniform grid on [-L, L) and Fourier coefficients
//
//   u_m = (1/n) sum_j u(x_j) exp(-i k_m x_j),   k_m = pi m / L,   m = -n/2 .. n/2-1.
//
// Coefficients are stored in FFT order (m = 0, 1, ..., n/2-1, -n/2, ..., -1);
// Grid::storage_index / Grid::signed_mode convert between the two.

#include <complex>
#include <span>
#include <vector>

namespace fowler {

using cplx = std::complex<double>;

class Grid {
 public:
  Grid(int n, double half_length);

  int n() const { return n_; }
  double half_length() const { return half_length_; }
  double dx() const { return 2.0 * half_length_ / n_; }
  double x(int j) const { return -half_length_ + j * dx(); }
  std::vector<double> points() const;

  /// Wavenumber of the coefficient stored at `idx`.
  double wavenumber(int idx) const;
  /// Wavenumbers in storage order.
  const std::vector<double>& wavenumbers() const { return k_; }
  /// Signed mode number m of storage slot idx.
  int signed_mode(int idx) const { return idx < n_ / 2 ? idx : idx - n_; }
  /// Storage slot of signed mode m.
  int storage_index(int m) const { return m >= 0 ? m : m + n_; }
  /// Storage slot of the unpaired mode m = -n/2.
  int nyquist_index() const { return n_ / 2; }

  bool operator==(const Grid& o) const { return n_ == o.n_ && half_length_ == o.half_length_; }

 private:
  int n_;
  double half_length_;
  std::vector<double> k_;
};

struct SpectralField {
  Grid grid;
  std::vector<cplx> coeffs;

  explicit SpectralField(Grid g) : grid(std::move(g)), coeffs(grid.n(), cplx{}) {}
  SpectralField(Grid g, std::vector<cplx> c);

  cplx mode(int m) const { return coeffs[grid.storage_index(m)]; }
  cplx& mode(int m) { return coeffs[grid.storage_index(m)]; }

  SpectralField& operator+=(const SpectralField& o);
  SpectralField& operator-=(const SpectralField& o);
  SpectralField& operator*=(double s);
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(double s, SpectralField a);

SpectralField to_spectral(std::span<const double> samples, const Grid& grid);
std::vector<double> to_physical(const SpectralField& u);

/// Spectral derivative (multiplication by i k_m), Nyquist mode zeroed.
SpectralField derivative(const SpectralField& u);

/// Coefficients of (1/2) d/dx (u^2). With `dealias` the 2/3 rule is applied:
/// modes with 3|m| >= n are removed from u before squaring and from the result.
SpectralField nonlinear_flux(const SpectralField& u, bool dealias = true);

/// Coefficients of the pointwise product u v, same dealiasing rule.
SpectralField product(const SpectralField& u, const SpectralField& v, bool dealias = true);

/// \int u dx over one period.
double mass(const SpectralField& u);

/// Discrete stand-in for the C^1_b norm: max(sup|u|, sup|u_x|) on the grid.
double c1_norm(const SpectralField& u);

double sup_norm(std::span<const double> v);

/// Zero the coefficients with 3|m| >= n.
void truncate_two_thirds(SpectralField& u);

/// Restore exact Hermitian symmetry: c_{-m} = conj(c_m), real mean, zero Nyquist.
void enforce_hermitian(SpectralField& u);

/// Largest |c_{-m} - conj(c_m)| relative to max |c_m|.
double hermitian_defect(const SpectralField& u);

}  // namespace fowler
