#pragma once

#include <span>
#include <vector>

#include "nudge/core/spectral.hpp"
#include "nudge/models/spec.hpp"

namespace nudge {

/// Pseudo-spectral vorticity equation w_t = -u.grad(w) + mu Lap(w), with
/// -Lap(psi) = w and u = (psi_y, -psi_x). The advected field is truncated to
/// |mode| <= n/3 before the product and the product is truncated again.
///
/// Not thread-safe: instances own their work arrays and FFT plans.
class NavierStokesOperator {
 public:
  NavierStokesOperator(double mu, const Grid2D& g)
      : mu_(mu), grid_(g), sp_(g), n_(sp_.spectrum_size()), w_hat_(n_), z_hat_(n_), d_hat_(n_), tmp_(n_),
        u_(g.size()), v_(g.size()), wx_(g.size()), wy_(g.size()) {
    if (!(mu > 0.0)) throw ConfigError("model.mu", "must be positive");
  }

  const Grid2D& grid() const noexcept { return grid_; }
  double mu() const noexcept { return mu_; }
  Spectral2D& spectral() noexcept { return sp_; }

  /// -u.grad(w) with u from w.
  void nondiffusive(std::span<const double> w, std::span<double> out) {
    sp_.forward(check(w), w_hat_);
    advection(w_hat_, tmp_);
    sp_.inverse(tmp_, out);
  }

  void dissipative(std::span<const double> w, std::span<double> out) {
    sp_.forward(check(w), w_hat_);
    each([&](std::size_t k, std::size_t i, std::size_t j) { tmp_[k] = -mu_ * sp_.k2(i, j) * w_hat_[k]; });
    sp_.inverse(tmp_, out);
  }

  void reference(std::span<const double> w, std::span<double> out) {
    sp_.forward(check(w), w_hat_);
    advection(w_hat_, tmp_);
    each([&](std::size_t k, std::size_t i, std::size_t j) { tmp_[k] -= mu_ * sp_.k2(i, j) * w_hat_[k]; });
    sp_.inverse(tmp_, out);
  }

  /// F[z] + D[z] + lambda d - eta Lap(d).
  void aot(std::span<const double> z, std::span<const double> d, double lambda, double eta, std::span<double> out) {
    sp_.forward(check(z), z_hat_);
    sp_.forward(check(d), d_hat_);
    advection(z_hat_, tmp_);
    assimilate(lambda, eta, out);
  }

  /// F[z + d] + D[z] + lambda d - eta Lap(d); the streamfunction is solved
  /// from z + d.
  void idda(std::span<const double> z, std::span<const double> d, double lambda, double eta, std::span<double> out) {
    sp_.forward(check(z), z_hat_);
    sp_.forward(check(d), d_hat_);
    for (std::size_t k = 0; k < n_; ++k) w_hat_[k] = z_hat_[k] + d_hat_[k];
    advection(w_hat_, tmp_);
    assimilate(lambda, eta, out);
  }

 private:
  template <class F>
  void each(F&& f) const {
    const std::size_t h = sp_.half_ny();
    for (std::size_t i = 0; i < grid_.nx; ++i)
      for (std::size_t j = 0; j < h; ++j) f(i * h + j, i, j);
  }

  std::span<const double> check(std::span<const double> f) const {
    if (f.size() != grid_.size()) throw Error("NavierStokesOperator: state size does not match the grid");
    return f;
  }

  void assimilate(double lambda, double eta, std::span<double> out) {
    each([&](std::size_t k, std::size_t i, std::size_t j) {
      const double k2 = sp_.k2(i, j);
      tmp_[k] += -mu_ * k2 * z_hat_[k] + (lambda + eta * k2) * d_hat_[k];
    });
    sp_.inverse(tmp_, out);
  }

  // Spectrum of the dealiased -u.grad(w) into `out`; `w_hat` is left intact.
  void advection(std::span<const cplx> w_hat, std::span<cplx> out) {
    auto spectrum_of = [&](auto&& symbol, std::span<double> phys) {
      each([&](std::size_t k, std::size_t i, std::size_t j) {
        out[k] = sp_.keeps(i, j) ? symbol(k, i, j) : cplx(0.0);
      });
      sp_.inverse(out, phys);
    };
    spectrum_of([&](std::size_t k, std::size_t i, std::size_t j) {
      const double k2 = sp_.k2(i, j);
      return k2 > 0.0 ? sp_.dy_symbol(i, j) * w_hat[k] / k2 : cplx(0.0);
    }, u_);
    spectrum_of([&](std::size_t k, std::size_t i, std::size_t j) {
      const double k2 = sp_.k2(i, j);
      return k2 > 0.0 ? -sp_.dx_symbol(i, j) * w_hat[k] / k2 : cplx(0.0);
    }, v_);
    spectrum_of([&](std::size_t k, std::size_t i, std::size_t j) { return sp_.dx_symbol(i, j) * w_hat[k]; }, wx_);
    spectrum_of([&](std::size_t k, std::size_t i, std::size_t j) { return sp_.dy_symbol(i, j) * w_hat[k]; }, wy_);
    for (std::size_t p = 0; p < wx_.size(); ++p) wx_[p] = -(u_[p] * wx_[p] + v_[p] * wy_[p]);
    sp_.forward(wx_, out);
    each([&](std::size_t k, std::size_t i, std::size_t j) {
      if (!sp_.keeps(i, j)) out[k] = 0.0;
    });
  }

  double mu_;
  Grid2D grid_;
  Spectral2D sp_;
  std::size_t n_;
  std::vector<cplx> w_hat_, z_hat_, d_hat_, tmp_;
  std::vector<double> u_, v_, wx_, wy_;
};

}  // namespace nudge
