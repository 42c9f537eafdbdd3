#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "nudge/core/errors.hpp"
#include "nudge/core/grid.hpp"

namespace nudge {

inline bool all_finite(std::span<const double> v) noexcept {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// Real-valued samples of a state on a periodic grid.
template <class GridT>
class BasicField {
 public:
  using grid_type = GridT;

  explicit BasicField(const GridT& grid) : grid_(grid), values_(grid.size(), 0.0) {}

  /// Throws NonFiniteError on NaN/Inf and Error on a shape mismatch.
  BasicField(const GridT& grid, std::vector<double> values)
      : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw Error("Field: value count does not match grid");
    if (!all_finite(values_)) throw NonFiniteError("Field: non-finite entry");
  }

  const GridT& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  const std::vector<double>& vector() const noexcept { return values_; }

  double& operator[](std::size_t i) noexcept { return values_[i]; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }

  BasicField& operator+=(const BasicField& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
  }
  BasicField& operator-=(const BasicField& o) {
    check_same(o);
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
  }
  BasicField& operator*=(double a) noexcept {
    for (auto& v : values_) v *= a;
    return *this;
  }

  friend BasicField operator+(BasicField a, const BasicField& b) { return a += b; }
  friend BasicField operator-(BasicField a, const BasicField& b) { return a -= b; }
  friend BasicField operator*(double s, BasicField a) { return a *= s; }
  friend BasicField operator*(BasicField a, double s) { return a *= s; }

 private:
  void check_same(const BasicField& o) const {
    if (!(o.grid_ == grid_)) throw Error("Field: grids differ");
  }

  GridT grid_;
  std::vector<double> values_;
};

using Field1D = BasicField<Grid1D>;
using Field2D = BasicField<Grid2D>;

template <class F>
Field1D sample_function(const Grid1D& g, F&& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.n; ++i) v[i] = f(g.x(i));
  return Field1D(g, std::move(v));
}

template <class F>
Field2D sample_function(const Grid2D& g, F&& f) {
  std::vector<double> v(g.size());
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) v[g.index(i, j)] = f(g.x(i), g.y(j));
  return Field2D(g, std::move(v));
}

/// Discrete L2 inner product: cell measure times the pointwise dot product.
inline double inner_product(std::span<const double> a, std::span<const double> b, double measure) {
  if (a.size() != b.size()) throw Error("inner_product: size mismatch");
  return measure * std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double l2_norm(std::span<const double> f, double measure) {
  if (!all_finite(f)) throw NonFiniteError("l2_norm: non-finite entry");
  double s = 0.0;
  for (double x : f) s += x * x;
  return std::sqrt(measure * s);
}

template <class G>
double l2_norm(const BasicField<G>& f) {
  return l2_norm(f.values(), cell_measure(f.grid()));
}

template <class G>
double inner_product(const BasicField<G>& a, const BasicField<G>& b) {
  return inner_product(a.values(), b.values(), cell_measure(a.grid()));
}

/// L2 distance between two raw state vectors on the same grid.
inline double l2_distance(std::span<const double> a, std::span<const double> b, double measure) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(measure * s);
}

template <class G>
double l2_distance(const BasicField<G>& a, const BasicField<G>& b) {
  return l2_distance(a.values(), b.values(), cell_measure(a.grid()));
}

template <class G>
double mean(const BasicField<G>& f) {
  const auto v = f.values();
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

}  // namespace nudge
