#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <vector>

#include "nudge/core/field.hpp"
#include "nudge/core/spectral.hpp"
#include "nudge/interp/interp1d.hpp"
#include "nudge/interp/rbf2d.hpp"

namespace nudge {

struct CoercivityTerms {
  double inner = 0.0;       // <f~, f>
  double norm2 = 0.0;       // |f|^2
  double grad_norm2 = 0.0;  // |grad f|^2

  /// inner - (alpha |f|^2 - C^2 h^2 / 2 |grad f|^2); nonnegative when the bound holds.
  double margin(double alpha, double c, double h) const noexcept {
    return inner - (alpha * norm2 - 0.5 * c * c * h * h * grad_norm2);
  }
};

namespace detail {

inline Field1D interpolate_samples(const Field1D& f, const Network1D& net) {
  return GridInterpolator1D(net, f.grid()).evaluate(sample_at(f, net));
}

inline Field2D interpolate_samples(const Field2D& f, const Network2D& net) {
  return GridInterpolator2D(net, f.grid()).evaluate(sample_at(f, net));
}

inline std::vector<Field1D> gradient(const Field1D& f) {
  Spectral1D sp(f.grid());
  std::vector<double> d(f.size());
  sp.derivative(f.values(), 1, d);
  return {Field1D(f.grid(), std::move(d))};
}

inline std::vector<Field2D> gradient(const Field2D& f) {
  Spectral2D sp(f.grid());
  std::vector<double> dx(f.size()), dy(f.size());
  sp.derivative(f.values(), 1, 0, dx);
  sp.derivative(f.values(), 0, 1, dy);
  return {Field2D(f.grid(), std::move(dx)), Field2D(f.grid(), std::move(dy))};
}

template <class F>
double grad_inner(const std::vector<F>& a, const std::vector<F>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += inner_product(a[i], b[i]);
  return s;
}

}  // namespace detail

template <class FieldT, class NetT>
CoercivityTerms coercivity_diagnostic(const FieldT& f, const NetT& net) {
  const auto ft = detail::interpolate_samples(f, net);
  const auto g = detail::gradient(f);
  return {inner_product(ft, f), inner_product(f, f), detail::grad_inner(g, g)};
}

inline CoercivityTerms coercivity_diagnostic(const Field1D& f, const ObservationNetwork& net) {
  return coercivity_diagnostic(f, std::get<Network1D>(net));
}
inline CoercivityTerms coercivity_diagnostic(const Field2D& f, const ObservationNetwork& net) {
  return coercivity_diagnostic(f, std::get<Network2D>(net));
}

/// <grad f~, grad f> / |grad f~|^2 with spectral gradients.
template <class FieldT, class NetT>
double kappa_alignment(const FieldT& f, const NetT& net) {
  const auto gt = detail::gradient(detail::interpolate_samples(f, net));
  const auto g = detail::gradient(f);
  const double den = detail::grad_inner(gt, gt);
  if (!(den > 1e-24 * detail::grad_inner(g, g))) throw InterpolationError("kappa_alignment: interpolant has zero gradient");
  return detail::grad_inner(gt, g) / den;
}

inline double kappa_alignment(const Field1D& f, const ObservationNetwork& net) {
  return kappa_alignment(f, std::get<Network1D>(net));
}
inline double kappa_alignment(const Field2D& f, const ObservationNetwork& net) {
  return kappa_alignment(f, std::get<Network2D>(net));
}

/// Sine and cosine modes 1..8 on a period of length `length`.
inline std::vector<std::function<double(double)>> probe_modes_1d(double length) {
  std::vector<std::function<double(double)>> out;
  for (int k = 1; k <= 8; ++k) {
    const double w = 2.0 * std::numbers::pi * k / length;
    out.emplace_back([w](double x) { return std::sin(w * x); });
    out.emplace_back([w](double x) { return std::cos(w * x); });
  }
  return out;
}

namespace detail {

template <class FieldT, class Interp>
double interp_ratio(const FieldT& f, const Interp& itp, double h, std::vector<double>& buf) {
  const auto g = gradient(f);
  const double gn = std::sqrt(grad_inner(g, g));
  if (!(gn > 1e-12 * std::max(1.0, l2_norm(f)))) return 0.0;
  itp(f, buf);
  double s = 0.0;
  const auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) s += (v[i] - buf[i]) * (v[i] - buf[i]);
  return std::sqrt(s * cell_measure(f.grid())) / (h * gn);
}

}  // namespace detail

/// max over probes and h of |f - f~| / (h |grad f|) with equispaced sensors.
/// Probes are the modes of probe_modes_1d and all pairwise products of them.
inline double estimate_interp_constant(InterpMethod method, double length, std::span<const double> h_values,
                                       std::size_t grid_n = 0) {
  if (method == InterpMethod::RbfWendlandC2) throw Error("estimate_interp_constant: RBF requires a 2D domain");
  if (h_values.size() < 2) throw Error("estimate_interp_constant: at least two h values required");
  const auto modes = probe_modes_1d(length);
  double c = 0.0;
  for (double h : h_values) {
    const auto ns = static_cast<std::size_t>(std::llround(length / h));
    if (ns < (method == InterpMethod::CubicSpline ? 3u : 1u)) throw Error("estimate_interp_constant: h too large");
    const auto net = equispaced_network(ns, length, method);
    const Grid1D g{grid_n ? grid_n : std::max<std::size_t>(512, 16 * ns), length};
    const GridInterpolator1D gi(net, g);
    const SampleOperator s(net, g);
    auto itp = [&](const Field1D& f, std::vector<double>& out) {
      out.resize(g.n);
      gi.evaluate(s.apply(f.values()), out);
    };
    std::vector<double> buf;
    const double hh = net.h();
    for (std::size_t a = 0; a < modes.size(); ++a) {
      c = std::max(c, detail::interp_ratio(sample_function(g, modes[a]), itp, hh, buf));
      for (std::size_t b = a; b < modes.size(); ++b) {
        const auto& fa = modes[a];
        const auto& fb = modes[b];
        c = std::max(c, detail::interp_ratio(sample_function(g, [&](double x) { return fa(x) * fb(x); }), itp, hh, buf));
      }
    }
  }
  return c;
}

/// RBF version on Halton networks with Ns = round(lx ly / h^2); probes are the
/// tensor products of the 1D modes in x and y.
inline double estimate_interp_constant(double lx, double ly, double rho, std::span<const double> h_values,
                                       std::size_t grid_n = 64) {
  if (h_values.size() < 2) throw Error("estimate_interp_constant: at least two h values required");
  const auto mx = probe_modes_1d(lx);
  const auto my = probe_modes_1d(ly);
  const Grid2D g{grid_n, grid_n, lx, ly};
  double c = 0.0;
  for (double h : h_values) {
    const auto ns = static_cast<std::size_t>(std::llround(lx * ly / (h * h)));
    if (ns < 1) throw Error("estimate_interp_constant: h too large");
    const auto net = halton_network(ns, lx, ly, rho);
    const GridInterpolator2D gi(net, g);
    const SampleOperator s(net, g);
    auto itp = [&](const Field2D& f, std::vector<double>& out) {
      out.resize(g.size());
      gi.evaluate(s.apply(f.values()), out);
    };
    std::vector<double> buf;
    for (const auto& fx : mx)
      for (const auto& fy : my)
        c = std::max(c, detail::interp_ratio(sample_function(g, [&](double x, double y) { return fx(x) * fy(y); }),
                                             itp, net.h(), buf));
  }
  return c;
}

}  // namespace nudge
