#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "nudge/core/field.hpp"
#include "nudge/interp/network.hpp"
#include "nudge/interp/sampling.hpp"
#include "nudge/interp/tridiagonal.hpp"

namespace nudge {

namespace detail {

struct Segment1D {
  std::size_t k;   // left sensor
  double offset;   // x - x_k, in [0, gap)
  double width;    // gap to the cyclic successor
};

inline Segment1D locate_segment(const Network1D& net, double x) {
  const auto& p = net.points();
  x = wrap_periodic(x, net.length());
  const std::size_t n = p.size();
  auto it = std::upper_bound(p.begin(), p.end(), x);
  if (it == p.begin()) {
    // before the first sensor: wrap-around segment from the last one
    return {n - 1, x + net.length() - p[n - 1], net.gap(n - 1)};
  }
  const auto k = static_cast<std::size_t>(std::distance(p.begin(), it) - 1);
  return {k, x - p[k], net.gap(k)};
}

/// Second-derivative moments of the periodic cubic spline through (x_k, y_k).
inline std::vector<double> spline_moments(const Network1D& net, std::span<const double> y) {
  const std::size_t n = net.size();
  std::vector<double> a(n), b(n), c(n), r(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i + n - 1) % n, ip = (i + 1) % n;
    const double hm = net.gap(im), hp = net.gap(i);
    a[i] = hm / 6.0;
    b[i] = (hm + hp) / 3.0;
    c[i] = hp / 6.0;
    r[i] = (y[ip] - y[i]) / hp - (y[i] - y[im]) / hm;
  }
  return solve_cyclic_tridiagonal(a, b, c, c[n - 1], a[0], r);
}

/// Value and first two derivatives on one segment. Linear ignores moments.
inline std::array<double, 3> eval_segment(InterpMethod m, const Segment1D& s, double y0, double y1,
                                          double m0, double m1) {
  const double h = s.width, t = s.offset, u = h - t;
  if (m == InterpMethod::Linear) {
    return {(y0 * u + y1 * t) / h, (y1 - y0) / h, 0.0};
  }
  const double v = m0 * u * u * u / (6 * h) + m1 * t * t * t / (6 * h) + (y0 / h - m0 * h / 6) * u +
                   (y1 / h - m1 * h / 6) * t;
  const double d1 = -m0 * u * u / (2 * h) + m1 * t * t / (2 * h) + (y1 - y0) / h - (m1 - m0) * h / 6;
  const double d2 = (m0 * u + m1 * t) / h;
  return {v, d1, d2};
}

}  // namespace detail

/// A periodic 1D interpolant (piecewise linear or cubic spline) built from
/// values at the sensors of a network.
class Interpolant1D {
 public:
  Interpolant1D(Network1D net, std::vector<double> values) : net_(std::move(net)), values_(std::move(values)) {
    if (values_.size() != net_.size()) throw Error("build_interpolant: one value per sensor required");
    if (net_.method() == InterpMethod::CubicSpline) moments_ = detail::spline_moments(net_, values_);
  }

  const Network1D& network() const noexcept { return net_; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Spline second-derivative moments; empty for linear interpolation.
  const std::vector<double>& moments() const noexcept { return moments_; }

  double operator()(double x) const { return eval(x)[0]; }

  /// order 0, 1 or 2. The piecewise-linear second derivative is reported as 0.
  double derivative(double x, int order) const { return eval(x).at(static_cast<std::size_t>(order)); }

 private:
  std::array<double, 3> eval(double x) const {
    if (net_.size() == 1) return {values_[0], 0.0, 0.0};
    const auto s = detail::locate_segment(net_, x);
    const std::size_t k1 = (s.k + 1) % net_.size();
    const bool spline = !moments_.empty();
    return detail::eval_segment(net_.method(), s, values_[s.k], values_[k1], spline ? moments_[s.k] : 0.0,
                                spline ? moments_[k1] : 0.0);
  }

  Network1D net_;
  std::vector<double> values_;
  std::vector<double> moments_;
};

inline Interpolant1D build_interpolant(const Network1D& net, std::span<const double> values) {
  return Interpolant1D(net, std::vector<double>(values.begin(), values.end()));
}

/// Evaluation of 1D interpolants on a fixed grid. Each node stores the
/// weights of its segment's two values and two moments, so a call costs one
/// moment solve (spline) and a few multiply-adds per node.
class GridInterpolator1D {
 public:
  GridInterpolator1D(const Network1D& net, const Grid1D& g) : net_(net), grid_(g) {
    if (std::abs(net.length() - g.length) > 1e-12 * g.length)
      throw Error("GridInterpolator1D: network and grid domains differ");
    nodes_.reserve(g.n);
    for (std::size_t i = 0; i < g.n; ++i) {
      const auto s = detail::locate_segment(net, g.x(i));
      const double h = s.width, t = s.offset, u = h - t;
      Node w;
      w.k0 = s.k;
      w.k1 = s.k + 1 == net.size() ? 0 : s.k + 1;
      w.v = {u / h, t / h, u * u * u / (6 * h) - h * u / 6, t * t * t / (6 * h) - h * t / 6};
      w.d1 = {-1 / h, 1 / h, -u * u / (2 * h) + h / 6, t * t / (2 * h) - h / 6};
      w.d2 = {u / h, t / h};
      nodes_.push_back(w);
    }
  }

  const Network1D& network() const noexcept { return net_; }
  const Grid1D& grid() const noexcept { return grid_; }

  /// `d1`/`d2` may be empty; they receive analytic derivatives of the
  /// interpolant (the piecewise-linear second derivative is 0).
  void evaluate(std::span<const double> values, std::span<double> out, std::span<double> d1 = {},
                std::span<double> d2 = {}) const {
    const std::size_t ns = net_.size();
    if (values.size() != ns) throw Error("GridInterpolator1D: one value per sensor required");
    if (ns == 1) {
      std::fill(out.begin(), out.end(), values[0]);
      std::fill(d1.begin(), d1.end(), 0.0);
      std::fill(d2.begin(), d2.end(), 0.0);
      return;
    }
    const auto mom = net_.method() == InterpMethod::CubicSpline ? detail::spline_moments(net_, values)
                                                                 : std::vector<double>(ns, 0.0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& w = nodes_[i];
      const double y0 = values[w.k0], y1 = values[w.k1], m0 = mom[w.k0], m1 = mom[w.k1];
      out[i] = w.v[0] * y0 + w.v[1] * y1 + w.v[2] * m0 + w.v[3] * m1;
    }
    if (!d1.empty())
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& w = nodes_[i];
        d1[i] = w.d1[0] * values[w.k0] + w.d1[1] * values[w.k1] + w.d1[2] * mom[w.k0] + w.d1[3] * mom[w.k1];
      }
    if (!d2.empty())
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const auto& w = nodes_[i];
        d2[i] = w.d2[0] * mom[w.k0] + w.d2[1] * mom[w.k1];
      }
  }

  Field1D evaluate(std::span<const double> values) const {
    std::vector<double> out(grid_.n);
    evaluate(values, out);
    return Field1D(grid_, std::move(out));
  }

 private:
  struct Node {
    std::size_t k0, k1;
    std::array<double, 4> v, d1;
    std::array<double, 2> d2;
  };

  Network1D net_;
  Grid1D grid_;
  std::vector<Node> nodes_;
};

inline Field1D evaluate_on_grid(const Interpolant1D& itp, const Grid1D& g) {
  return GridInterpolator1D(itp.network(), g).evaluate(itp.values());
}

/// Grid field of the interpolant of (obs_values - v at the sensors).
inline Field1D interpolated_discrepancy(std::span<const double> obs_values, const Field1D& v, const Network1D& net) {
  auto sv = sample_at(v, net);
  if (obs_values.size() != sv.size()) throw Error("interpolated_discrepancy: one observation per sensor required");
  for (std::size_t k = 0; k < sv.size(); ++k) sv[k] = obs_values[k] - sv[k];
  return GridInterpolator1D(net, v.grid()).evaluate(sv);
}

}  // namespace nudge
