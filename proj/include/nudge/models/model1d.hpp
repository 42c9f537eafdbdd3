#pragma once

#include <optional>
#include <span>
#include <vector>

#include "nudge/core/derivatives.hpp"
#include "nudge/models/spec.hpp"

namespace nudge {

inline DiffScheme default_diff_scheme(const ModelSpec& m) {
  return std::holds_alternative<KuramotoSivashinsky>(m) ? DiffScheme::Spectral : DiffScheme::CentralFd;
}

/// Right-hand sides of the 1D models on a periodic grid. With spectral
/// differentiation every right-hand side is projected onto |mode| <= n/3,
/// which keeps the solution in the dealiased band and bounds the stiffness
/// of the fourth-order term.
///
/// Not thread-safe: instances own their work arrays and FFT plans.
class Model1D {
 public:
  Model1D(const ModelSpec& m, const Grid1D& g, DiffScheme scheme)
      : spec_(m), grid_(g), scheme_(scheme), d1_(g.n), d2_(g.n), d4_(g.n) {
    if (is_2d(m)) throw Error("Model1D: " + model_name(m) + " is two-dimensional");
    validate(m);
    if (scheme_ == DiffScheme::Spectral) {
      spectral_.emplace(g);
      hat_.resize(spectral_->spectrum_size());
      tmp_.resize(hat_.size());
    }
  }
  Model1D(const ModelSpec& m, const Grid1D& g) : Model1D(m, g, default_diff_scheme(m)) {}

  const ModelSpec& spec() const noexcept { return spec_; }
  const Grid1D& grid() const noexcept { return grid_; }
  DiffScheme diff_scheme() const noexcept { return scheme_; }
  bool is_ks() const noexcept { return std::holds_alternative<KuramotoSivashinsky>(spec_); }

  /// F[u], the non-diffusive part.
  void nondiffusive(std::span<const double> u, std::span<double> out) {
    derivatives(u);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = f_point(u[i], d1_[i], d2_[i]);
    finish(out);
  }

  /// D[u], the dissipative part.
  void dissipative(std::span<const double> u, std::span<double> out) {
    derivatives(u);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = d_point(d2_[i], d4_[i]);
    finish(out);
  }

  void reference(std::span<const double> u, std::span<double> out) {
    if (spectral_) return spectral_rhs(u, [this](std::size_t, double w, double wx) { return nonlinear(w, wx); }, out);
    derivatives(u);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = f_point(u[i], d1_[i], d2_[i]) + d_point(d2_[i], d4_[i]);
    finish(out);
  }

  /// F[v] + D[v] + lambda d.
  void aot(std::span<const double> v, std::span<const double> d, double lambda, std::span<double> out) {
    if (spectral_)
      return spectral_rhs(
          v, [&](std::size_t i, double w, double wx) { return nonlinear(w, wx) + lambda * d[i]; }, out);
    derivatives(v);
    for (std::size_t i = 0; i < v.size(); ++i)
      out[i] = f_point(v[i], d1_[i], d2_[i]) + d_point(d2_[i], d4_[i]) + lambda * d[i];
    finish(out);
  }

  /// F[v + d] + D[v] + lambda d. `d_x` and `d_xx` are analytic derivatives of
  /// the interpolant; they are read only when full substitution needs them.
  void idda(std::span<const double> v, std::span<const double> d, std::span<const double> d_x,
            std::span<const double> d_xx, const SchemeSpec& s, std::span<double> out) {
    const bool full = s.nonlinear_mode == NonlinearMode::FullSubstitution;
    if (full && d_x.size() != v.size()) throw Error("idda: full substitution needs the interpolant derivative");
    if (full && is_ks() && d_xx.size() != v.size())
      throw Error("idda: ks needs the second derivative of the interpolant");
    if (!full && is_ks()) throw Error("idda: ks supports full substitution only");
    if (spectral_) {
      const bool ks = is_ks();
      return spectral_rhs(
          v,
          [&](std::size_t i, double vi, double vx) {
            const double w = vi + d[i];
            double r = nonlinear(w, full ? vx + d_x[i] : vx) + s.lambda * d[i];
            if (ks) r -= 2.0 * d_xx[i];
            return r;
          },
          out);
    }
    derivatives(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
      const double w = v[i] + d[i];
      const double wx = full ? d1_[i] + d_x[i] : d1_[i];
      const double wxx = full && is_ks() ? d2_[i] + d_xx[i] : d2_[i];
      out[i] = f_point(w, wx, wxx) + d_point(d2_[i], d4_[i]) + s.lambda * d[i];
    }
    finish(out);
  }

 private:
  // -u u_x and, for KPP, the reaction.
  double nonlinear(double u, double ux) const noexcept {
    if (spec_.index() == 1) return -u * ux - std::get<KppBurgers>(spec_).r * u * (u - 1.0) * (u - 2.0);
    return -u * ux;
  }

  // Symbol of the linear part acting on the model state: -mu k^2, or
  // 2 k^2 - k^4 for KS.
  double linear_symbol(double k) const noexcept {
    const double k2 = k * k;
    return is_ks() ? 2.0 * k2 - k2 * k2 : -model_mu(spec_) * k2;
  }

  // out = P[ FFT(pointwise(i, v_i, v_x,i)) + linear_symbol * v^ ] in physical
  // space, with P the 2/3 truncation. Four transforms per call.
  template <class Pointwise>
  void spectral_rhs(std::span<const double> v, Pointwise&& pointwise, std::span<double> out) {
    if (v.size() != grid_.n) throw Error("Model1D: state size does not match the grid");
    auto& sp = *spectral_;
    sp.forward(v, hat_);
    for (std::size_t j = 0; j < hat_.size(); ++j) tmp_[j] = hat_[j] * derivative_symbol(sp.mode(j), sp.k(j), 1, grid_.n);
    sp.inverse(tmp_, d1_);
    for (std::size_t i = 0; i < v.size(); ++i) d2_[i] = pointwise(i, v[i], d1_[i]);
    sp.forward(d2_, tmp_);
    const long cut = dealias_cutoff(grid_.n);
    for (std::size_t j = 0; j < hat_.size(); ++j)
      tmp_[j] = sp.mode(j) > cut ? cplx(0.0) : tmp_[j] + linear_symbol(sp.k(j)) * hat_[j];
    sp.inverse(tmp_, out);
  }

  double f_point(double u, double ux, double uxx) const noexcept {
    switch (spec_.index()) {
      case 0: return -u * ux;
      case 1: return -u * ux - std::get<KppBurgers>(spec_).r * u * (u - 1.0) * (u - 2.0);
      default: return -u * ux - 2.0 * uxx;
    }
  }

  double d_point(double uxx, double uxxxx) const noexcept {
    return is_ks() ? -uxxxx : model_mu(spec_) * uxx;
  }

  void derivatives(std::span<const double> u) {
    if (u.size() != grid_.n) throw Error("Model1D: state size does not match the grid");
    if (!spectral_) {
      fd::derivative(u, grid_.dx(), 1, d1_);
      fd::derivative(u, grid_.dx(), 2, d2_);
      if (is_ks()) fd::derivative(u, grid_.dx(), 4, d4_);
      return;
    }
    spectral_->forward(u, hat_);
    apply_symbol(1, d1_);
    apply_symbol(2, d2_);
    if (is_ks()) apply_symbol(4, d4_);
  }

  void apply_symbol(int order, std::span<double> out) {
    for (std::size_t j = 0; j < hat_.size(); ++j)
      tmp_[j] = hat_[j] * derivative_symbol(spectral_->mode(j), spectral_->k(j), order, grid_.n);
    spectral_->inverse(tmp_, out);
  }

  void finish(std::span<double> out) {
    if (spectral_) spectral_->project(out);
  }

  ModelSpec spec_;
  Grid1D grid_;
  DiffScheme scheme_;
  std::optional<Spectral1D> spectral_;
  std::vector<cplx> hat_, tmp_;
  std::vector<double> d1_, d2_, d4_;
};

}  // namespace nudge
