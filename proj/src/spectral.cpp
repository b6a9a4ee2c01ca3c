#include "fowler/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "fowler/errors.hpp"

namespace fowler {

namespace {

// FFTW plans are created once per size under a lock and then executed through the
// thread-safe new-array interface.
struct PlanPair {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const PlanPair& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, PlanPair> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<cplx> a(n), b(n);
  auto* in = reinterpret_cast<fftw_complex*>(a.data());
  auto* out = reinterpret_cast<fftw_complex*>(b.data());
  PlanPair p;
  p.forward = fftw_plan_dft_1d(n, in, out, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.backward = fftw_plan_dft_1d(n, in, out, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(n, p).first->second;
}

void fft(std::vector<cplx>& in, std::vector<cplx>& out, bool forward) {
  const auto& p = plans_for(static_cast<int>(in.size()));
  fftw_execute_dft(forward ? p.forward : p.backward, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

void require_same_grid(const SpectralField& a, const SpectralField& b) {
  if (!(a.grid == b.grid)) throw ShapeError("spectral fields live on different grids");
}

}  // namespace

Grid::Grid(int n, double half_length) : n_(n), half_length_(half_length) {
  if (n < 2 || n % 2 != 0) throw DomainError("Grid: n must be a positive even integer");
  if (!(half_length > 0.0)) throw DomainError("Grid: half_length must be positive");
  k_.resize(n);
  for (int i = 0; i < n; ++i) k_[i] = std::numbers::pi * signed_mode(i) / half_length;
}

std::vector<double> Grid::points() const {
  std::vector<double> x(n_);
  for (int j = 0; j < n_; ++j) x[j] = this->x(j);
  return x;
}

double Grid::wavenumber(int idx) const { return k_[idx]; }

SpectralField::SpectralField(Grid g, std::vector<cplx> c) : grid(std::move(g)), coeffs(std::move(c)) {
  if (static_cast<int>(coeffs.size()) != grid.n()) throw ShapeError("SpectralField: coefficient count != n");
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= o.coeffs[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs) c *= s;
  return *this;
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(double s, SpectralField a) { return a *= s; }

SpectralField to_spectral(std::span<const double> samples, const Grid& grid) {
  const int n = grid.n();
  if (static_cast<int>(samples.size()) != n)
    throw ShapeError("to_spectral: expected " + std::to_string(n) + " samples, got " +
                     std::to_string(samples.size()));
  std::vector<cplx> in(samples.begin(), samples.end()), out(n);
  fft(in, out, true);
  // x_0 = -L contributes exp(i pi m) = (-1)^m.
  for (int i = 0; i < n; ++i) {
    const double sign = (grid.signed_mode(i) % 2 == 0) ? 1.0 : -1.0;
    out[i] *= sign / n;
  }
  return SpectralField(grid, std::move(out));
}

std::vector<double> to_physical(const SpectralField& u) {
  const int n = u.grid.n();
  std::vector<cplx> in(n), out(n);
  for (int i = 0; i < n; ++i) {
    const double sign = (u.grid.signed_mode(i) % 2 == 0) ? 1.0 : -1.0;
    in[i] = sign * u.coeffs[i];
  }
  fft(in, out, false);
  std::vector<double> v(n);
  for (int j = 0; j < n; ++j) v[j] = out[j].real();
  return v;
}

SpectralField derivative(const SpectralField& u) {
  SpectralField d(u.grid);
  for (int i = 0; i < u.grid.n(); ++i) d.coeffs[i] = cplx{0.0, u.grid.wavenumber(i)} * u.coeffs[i];
  d.coeffs[u.grid.nyquist_index()] = 0.0;
  return d;
}

void truncate_two_thirds(SpectralField& u) {
  const int n = u.grid.n();
  for (int i = 0; i < n; ++i)
    if (3 * std::abs(u.grid.signed_mode(i)) >= n) u.coeffs[i] = 0.0;
}

SpectralField product(const SpectralField& u, const SpectralField& v, bool dealias) {
  require_same_grid(u, v);
  SpectralField uu = u, vv = v;
  if (dealias) {
    truncate_two_thirds(uu);
    truncate_two_thirds(vv);
  }
  const auto pu = to_physical(uu);
  const auto pv = to_physical(vv);
  std::vector<double> w(pu.size());
  for (std::size_t j = 0; j < w.size(); ++j) w[j] = pu[j] * pv[j];
  auto out = to_spectral(w, u.grid);
  if (dealias) truncate_two_thirds(out);
  return out;
}

SpectralField nonlinear_flux(const SpectralField& u, bool dealias) {
  auto sq = product(u, u, dealias);
  sq *= 0.5;
  return derivative(sq);
}

double mass(const SpectralField& u) { return 2.0 * u.grid.half_length() * u.coeffs[0].real(); }

double sup_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) {
    if (std::isnan(x)) return x;
    m = std::max(m, std::abs(x));
  }
  return m;
}

double c1_norm(const SpectralField& u) {
  return std::max(sup_norm(to_physical(u)), sup_norm(to_physical(derivative(u))));
}

void enforce_hermitian(SpectralField& u) {
  const int n = u.grid.n();
  u.coeffs[0] = u.coeffs[0].real();
  u.coeffs[u.grid.nyquist_index()] = 0.0;
  for (int m = 1; m < n / 2; ++m) {
    cplx& p = u.coeffs[m];
    cplx& q = u.coeffs[n - m];
    const cplx avg = 0.5 * (p + std::conj(q));
    p = avg;
    q = std::conj(avg);
  }
}

double hermitian_defect(const SpectralField& u) {
  const int n = u.grid.n();
  double scale = 0.0, defect = std::abs(u.coeffs[0].imag());
  for (const auto& c : u.coeffs) scale = std::max(scale, std::abs(c));
  for (int m = 1; m < n / 2; ++m) defect = std::max(defect, std::abs(u.coeffs[m] - std::conj(u.coeffs[n - m])));
  return scale > 0.0 ? defect / scale : defect;
}

}  // namespace fowler
