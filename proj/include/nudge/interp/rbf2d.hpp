#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "nudge/core/field.hpp"
#include "nudge/interp/network.hpp"
#include "nudge/interp/sampling.hpp"

namespace nudge {

/// Wendland's C2 function, (1-q)^4 (4q+1) on [0,1), zero beyond.
inline double wendland_c2(double q) noexcept {
  if (q >= 1.0) return 0.0;
  const double t = 1.0 - q;
  const double t2 = t * t;
  return t2 * t2 * (4.0 * q + 1.0);
}

namespace detail {

// Calls f(dx, dy) for every periodic image of (b - a) within distance r.
template <class F>
void for_each_image(const Point2& a, const Point2& b, double lx, double ly, double r, F&& f) {
  double dx = std::remainder(b.x - a.x, lx);
  double dy = std::remainder(b.y - a.y, ly);
  const int mx = static_cast<int>(std::ceil(r / lx)), my = static_cast<int>(std::ceil(r / ly));
  for (int i = -mx; i <= mx; ++i) {
    const double ex = dx + i * lx;
    if (std::abs(ex) >= r) continue;
    for (int j = -my; j <= my; ++j) {
      const double ey = dy + j * ly;
      if (ex * ex + ey * ey < r * r) f(ex, ey);
    }
  }
}

}  // namespace detail

/// Factorized kernel system of one network. The kernel is the periodization of
/// the Wendland C2 function over the torus, which reduces to the minimum-image
/// distance whenever the support radius is below half the domain.
class RbfSystem {
 public:
  explicit RbfSystem(const Network2D& net) : net_(net), radius_(net.support_radius()) {
    const auto& p = net_.points();
    const auto n = static_cast<Eigen::Index>(p.size());
    Eigen::MatrixXd k(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
      for (Eigen::Index b = a; b < n; ++b) {
        const double v = kernel(p[static_cast<std::size_t>(a)], p[static_cast<std::size_t>(b)]);
        k(a, b) = v;
        k(b, a) = v;
      }
    llt_.compute(k);
    if (llt_.info() != Eigen::Success) throw InterpolationError("RBF kernel matrix is not positive definite");
    const Eigen::VectorXd d = llt_.matrixLLT().diagonal();
    pivots_.assign(d.data(), d.data() + d.size());
    for (auto& x : pivots_) x *= x;
    if (llt_.rcond() < 1e-13) throw InterpolationError("RBF kernel matrix is numerically singular");
  }

  const Network2D& network() const noexcept { return net_; }
  double radius() const noexcept { return radius_; }
  /// Squared diagonal of the Cholesky factor.
  const std::vector<double>& pivots() const noexcept { return pivots_; }
  double rcond() const { return llt_.rcond(); }

  double kernel(const Point2& a, const Point2& b) const {
    double s = 0.0;
    detail::for_each_image(a, b, net_.lx(), net_.ly(), radius_,
                           [&](double dx, double dy) { s += wendland_c2(std::sqrt(dx * dx + dy * dy) / radius_); });
    return s;
  }

  std::vector<double> weights(std::span<const double> values) const {
    if (values.size() != net_.size()) throw Error("RbfSystem: one value per sensor required");
    Eigen::Map<const Eigen::VectorXd> rhs(values.data(), static_cast<Eigen::Index>(values.size()));
    Eigen::VectorXd w = llt_.solve(rhs);
    return {w.data(), w.data() + w.size()};
  }

 private:
  Network2D net_;
  double radius_;
  Eigen::LLT<Eigen::MatrixXd> llt_;
  std::vector<double> pivots_;
};

/// s(x) = sum_k w_k phi(|x - x_k|_per / r).
class Interpolant2D {
 public:
  Interpolant2D(std::shared_ptr<const RbfSystem> sys, std::span<const double> values)
      : sys_(std::move(sys)), values_(values.begin(), values.end()), weights_(sys_->weights(values)) {}

  const Network2D& network() const noexcept { return sys_->network(); }
  const std::shared_ptr<const RbfSystem>& system() const noexcept { return sys_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& weights() const noexcept { return weights_; }

  double operator()(double x, double y) const {
    const auto& p = network().points();
    double s = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) s += weights_[k] * sys_->kernel({x, y}, p[k]);
    return s;
  }

 private:
  std::shared_ptr<const RbfSystem> sys_;
  std::vector<double> values_;
  std::vector<double> weights_;
};

inline Interpolant2D build_interpolant(const Network2D& net, std::span<const double> values) {
  return Interpolant2D(std::make_shared<const RbfSystem>(net), values);
}

/// Sparse kernel-to-grid map for one (network, grid) pair; each evaluation is a
/// Cholesky solve plus one sparse product.
class GridInterpolator2D {
 public:
  GridInterpolator2D(std::shared_ptr<const RbfSystem> sys, const Grid2D& g) : sys_(std::move(sys)), grid_(g) {
    const auto& net = sys_->network();
    if (std::abs(net.lx() - g.lx) > 1e-12 * g.lx || std::abs(net.ly() - g.ly) > 1e-12 * g.ly)
      throw Error("GridInterpolator2D: network and grid domains differ");
    const double r = sys_->radius();
    const double dx = g.dx(), dy = g.dy();
    std::vector<Eigen::Triplet<double>> trip;
    const auto& pts = net.points();
    for (std::size_t k = 0; k < pts.size(); ++k) {
      const auto& p = pts[k];
      const long i_lo = static_cast<long>(std::ceil((p.x - r) / dx)), i_hi = static_cast<long>(std::floor((p.x + r) / dx));
      const long j_lo = static_cast<long>(std::ceil((p.y - r) / dy)), j_hi = static_cast<long>(std::floor((p.y + r) / dy));
      const long nx = static_cast<long>(g.nx), ny = static_cast<long>(g.ny);
      for (long i = i_lo; i <= i_hi; ++i) {
        const double ex = i * dx - p.x;
        for (long j = j_lo; j <= j_hi; ++j) {
          const double ey = j * dy - p.y;
          const double q = std::sqrt(ex * ex + ey * ey) / r;
          if (q >= 1.0) continue;
          const auto ii = static_cast<std::size_t>(((i % nx) + nx) % nx);
          const auto jj = static_cast<std::size_t>(((j % ny) + ny) % ny);
          trip.emplace_back(static_cast<int>(g.index(ii, jj)), static_cast<int>(k), wendland_c2(q));
        }
      }
    }
    eval_.resize(static_cast<Eigen::Index>(g.size()), static_cast<Eigen::Index>(pts.size()));
    eval_.setFromTriplets(trip.begin(), trip.end());
    eval_.makeCompressed();
  }

  GridInterpolator2D(const Network2D& net, const Grid2D& g)
      : GridInterpolator2D(std::make_shared<const RbfSystem>(net), g) {}

  const RbfSystem& system() const noexcept { return *sys_; }
  const Grid2D& grid() const noexcept { return grid_; }
  std::size_t nonzeros() const noexcept { return static_cast<std::size_t>(eval_.nonZeros()); }

  void evaluate(std::span<const double> values, std::span<double> out) const {
    const auto w = sys_->weights(values);
    Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
    Eigen::Map<Eigen::VectorXd> o(out.data(), static_cast<Eigen::Index>(out.size()));
    o.noalias() = eval_ * wv;
  }

  Field2D evaluate(std::span<const double> values) const {
    std::vector<double> out(grid_.size());
    evaluate(values, out);
    return Field2D(grid_, std::move(out));
  }

 private:
  std::shared_ptr<const RbfSystem> sys_;
  Grid2D grid_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> eval_;
};

inline Field2D evaluate_on_grid(const Interpolant2D& itp, const Grid2D& g) {
  return GridInterpolator2D(itp.system(), g).evaluate(itp.values());
}

inline Field2D interpolated_discrepancy(std::span<const double> obs_values, const Field2D& v, const Network2D& net) {
  auto sv = sample_at(v, net);
  if (obs_values.size() != sv.size()) throw Error("interpolated_discrepancy: one observation per sensor required");
  for (std::size_t k = 0; k < sv.size(); ++k) sv[k] = obs_values[k] - sv[k];
  return GridInterpolator2D(net, v.grid()).evaluate(sv);
}

}  // namespace nudge
