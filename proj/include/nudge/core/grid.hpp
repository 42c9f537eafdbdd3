#pragma once

#include <cmath>
#include <cstddef>
#include <variant>

#include "nudge/core/errors.hpp"

namespace nudge {

/// Uniform periodic grid on [0, length). Node i sits at i*dx; the endpoint is
/// not duplicated.
struct Grid1D {
  std::size_t n = 0;
  double length = 1.0;

  Grid1D() = default;
  Grid1D(std::size_t n_, double length_) : n(n_), length(length_) {
    if (n == 0) throw Error("Grid1D: n must be positive");
    if (!(length > 0.0) || !std::isfinite(length)) throw Error("Grid1D: length must be positive");
  }

  double dx() const noexcept { return length / static_cast<double>(n); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }
  std::size_t size() const noexcept { return n; }

  friend bool operator==(const Grid1D&, const Grid1D&) = default;
};

/// Tensor product of two periodic grids. Values are stored with y fastest:
/// index(i, j) = i*ny + j.
struct Grid2D {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = 1.0;
  double ly = 1.0;

  Grid2D() = default;
  Grid2D(std::size_t nx_, std::size_t ny_, double lx_, double ly_)
      : nx(nx_), ny(ny_), lx(lx_), ly(ly_) {
    if (nx == 0 || ny == 0) throw Error("Grid2D: nx and ny must be positive");
    if (!(lx > 0.0) || !(ly > 0.0)) throw Error("Grid2D: lx and ly must be positive");
  }

  double dx() const noexcept { return lx / static_cast<double>(nx); }
  double dy() const noexcept { return ly / static_cast<double>(ny); }
  double x(std::size_t i) const noexcept { return static_cast<double>(i) * dx(); }
  double y(std::size_t j) const noexcept { return static_cast<double>(j) * dy(); }
  std::size_t size() const noexcept { return nx * ny; }
  std::size_t index(std::size_t i, std::size_t j) const noexcept { return i * ny + j; }

  friend bool operator==(const Grid2D&, const Grid2D&) = default;
};

using Grid = std::variant<Grid1D, Grid2D>;

/// Quadrature weight of one node (dx or dx*dy).
inline double cell_measure(const Grid1D& g) noexcept { return g.dx(); }
inline double cell_measure(const Grid2D& g) noexcept { return g.dx() * g.dy(); }

}  // namespace nudge
