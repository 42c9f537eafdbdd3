#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "nudge/core/fft.hpp"
#include "nudge/core/grid.hpp"

namespace nudge {

using cplx = std::complex<double>;

/// Signed integer mode index of FFT slot j for an n-point full axis.
inline long signed_mode(std::size_t j, std::size_t n) noexcept {
  return j <= n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
}

/// Largest |mode| kept by the 2/3 dealiasing rule.
inline long dealias_cutoff(std::size_t n) noexcept { return static_cast<long>(n / 3); }

/// (i k)^order with the Nyquist slot zeroed for odd orders.
inline cplx derivative_symbol(long mode, double k, int order, std::size_t n) noexcept {
  if (order % 2 == 1 && n % 2 == 0 && std::labs(mode) == static_cast<long>(n / 2)) return 0.0;
  cplx s(1.0, 0.0);
  const cplx ik(0.0, k);
  for (int p = 0; p < order; ++p) s *= ik;
  return s;
}

/// Spectral operators on a periodic 1D grid.
class Spectral1D {
 public:
  explicit Spectral1D(const Grid1D& g) : grid_(g), fft_(g.n), k_(g.n / 2 + 1) {
    const double base = 2.0 * std::numbers::pi / g.length;
    for (std::size_t j = 0; j < k_.size(); ++j) k_[j] = base * static_cast<double>(j);
  }

  const Grid1D& grid() const noexcept { return grid_; }
  std::size_t spectrum_size() const noexcept { return k_.size(); }
  double k(std::size_t j) const noexcept { return k_[j]; }
  long mode(std::size_t j) const noexcept { return static_cast<long>(j); }

  void forward(std::span<const double> f, std::span<cplx> out) { fft_.forward(f, out); }
  void inverse(std::span<const cplx> s, std::span<double> out) { fft_.inverse(s, out); }

  /// Periodic derivative of order 1..4 (any non-negative order works).
  void derivative(std::span<const double> f, int order, std::span<double> out) {
    auto real = fft_.real();
    std::copy(f.begin(), f.end(), real.begin());
    fft_.execute_forward();
    auto s = fft_.spectrum();
    for (std::size_t j = 0; j < s.size(); ++j) s[j] *= derivative_symbol(mode(j), k_[j], order, grid_.n);
    fft_.execute_inverse();
    std::copy(real.begin(), real.end(), out.begin());
  }

  /// Galerkin projection onto |mode| <= n/3, in place.
  void project(std::span<double> f) {
    auto real = fft_.real();
    std::copy(f.begin(), f.end(), real.begin());
    fft_.execute_forward();
    auto s = fft_.spectrum();
    const long cut = dealias_cutoff(grid_.n);
    for (std::size_t j = 0; j < s.size(); ++j)
      if (mode(j) > cut) s[j] = 0.0;
    fft_.execute_inverse();
    std::copy(real.begin(), real.end(), f.begin());
  }

  RealFft& fft() noexcept { return fft_; }

 private:
  Grid1D grid_;
  RealFft fft_;
  std::vector<double> k_;
};

/// Spectral operators on a periodic 2D grid (x is the full axis, y the half axis).
class Spectral2D {
 public:
  explicit Spectral2D(const Grid2D& g)
      : grid_(g), fft_(g.nx, g.ny), kx_(g.nx), ky_(g.ny / 2 + 1) {
    const double bx = 2.0 * std::numbers::pi / g.lx;
    const double by = 2.0 * std::numbers::pi / g.ly;
    for (std::size_t i = 0; i < g.nx; ++i) kx_[i] = bx * static_cast<double>(signed_mode(i, g.nx));
    for (std::size_t j = 0; j < ky_.size(); ++j) ky_[j] = by * static_cast<double>(j);
  }

  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t spectrum_size() const noexcept { return grid_.nx * ky_.size(); }
  std::size_t half_ny() const noexcept { return ky_.size(); }
  double kx(std::size_t i) const noexcept { return kx_[i]; }
  double ky(std::size_t j) const noexcept { return ky_[j]; }
  long mode_x(std::size_t i) const noexcept { return signed_mode(i, grid_.nx); }
  long mode_y(std::size_t j) const noexcept { return static_cast<long>(j); }
  double k2(std::size_t i, std::size_t j) const noexcept { return kx_[i] * kx_[i] + ky_[j] * ky_[j]; }

  bool keeps(std::size_t i, std::size_t j) const noexcept {
    return std::labs(mode_x(i)) <= dealias_cutoff(grid_.nx) &&
           mode_y(j) <= dealias_cutoff(grid_.ny);
  }

  cplx dx_symbol(std::size_t i, std::size_t /*j*/, int order = 1) const noexcept {
    return derivative_symbol(mode_x(i), kx_[i], order, grid_.nx);
  }
  cplx dy_symbol(std::size_t /*i*/, std::size_t j, int order = 1) const noexcept {
    return derivative_symbol(mode_y(j), ky_[j], order, grid_.ny);
  }

  void forward(std::span<const double> f, std::span<cplx> out) { fft_.forward(f, out); }
  void inverse(std::span<const cplx> s, std::span<double> out) { fft_.inverse(s, out); }

  /// d^ox/dx^ox d^oy/dy^oy of f.
  void derivative(std::span<const double> f, int ox, int oy, std::span<double> out) {
    auto real = fft_.real();
    std::copy(f.begin(), f.end(), real.begin());
    fft_.execute_forward();
    auto s = fft_.spectrum();
    const std::size_t h = half_ny();
    for (std::size_t i = 0; i < grid_.nx; ++i)
      for (std::size_t j = 0; j < h; ++j) s[i * h + j] *= dx_symbol(i, j, ox) * dy_symbol(i, j, oy);
    fft_.execute_inverse();
    std::copy(real.begin(), real.end(), out.begin());
  }

  void laplacian(std::span<const double> f, std::span<double> out) {
    auto real = fft_.real();
    std::copy(f.begin(), f.end(), real.begin());
    fft_.execute_forward();
    auto s = fft_.spectrum();
    const std::size_t h = half_ny();
    for (std::size_t i = 0; i < grid_.nx; ++i)
      for (std::size_t j = 0; j < h; ++j) s[i * h + j] *= -k2(i, j);
    fft_.execute_inverse();
    std::copy(real.begin(), real.end(), out.begin());
  }

  RealFft& fft() noexcept { return fft_; }

 private:
  Grid2D grid_;
  RealFft fft_;
  std::vector<double> kx_;
  std::vector<double> ky_;
};

}  // namespace nudge
