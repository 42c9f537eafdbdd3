#pragma once

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "nudge/core/field.hpp"
#include "nudge/interp/network.hpp"

namespace nudge {

/// Reads a grid field at sensor locations by periodic linear (1D) or bilinear
/// (2D) interpolation of the node values. Sensors on nodes read the node.
class SampleOperator {
 public:
  SampleOperator(const Network1D& net, const Grid1D& g) {
    if (std::abs(net.length() - g.length) > 1e-12 * g.length)
      throw Error("SampleOperator: network and grid domains differ");
    for (double x : net.points()) {
      Stencil s{};
      auto [i0, f] = locate(x, g.dx(), g.n);
      s.index[0] = i0;
      s.index[1] = (i0 + 1) % g.n;
      s.weight[0] = 1.0 - f;
      s.weight[1] = f;
      s.count = 2;
      stencils_.push_back(s);
    }
  }

  SampleOperator(const Network2D& net, const Grid2D& g) {
    if (std::abs(net.lx() - g.lx) > 1e-12 * g.lx || std::abs(net.ly() - g.ly) > 1e-12 * g.ly)
      throw Error("SampleOperator: network and grid domains differ");
    for (const auto& p : net.points()) {
      auto [i0, fx] = locate(p.x, g.dx(), g.nx);
      auto [j0, fy] = locate(p.y, g.dy(), g.ny);
      const std::size_t i1 = (i0 + 1) % g.nx, j1 = (j0 + 1) % g.ny;
      Stencil s{};
      s.index = {g.index(i0, j0), g.index(i1, j0), g.index(i0, j1), g.index(i1, j1)};
      s.weight = {(1 - fx) * (1 - fy), fx * (1 - fy), (1 - fx) * fy, fx * fy};
      s.count = 4;
      stencils_.push_back(s);
    }
  }

  std::size_t size() const noexcept { return stencils_.size(); }

  void apply(std::span<const double> field, std::span<double> out) const {
    for (std::size_t k = 0; k < stencils_.size(); ++k) {
      const auto& s = stencils_[k];
      double v = 0.0;
      for (int m = 0; m < s.count; ++m) v += s.weight[m] * field[s.index[m]];
      out[k] = v;
    }
  }

  std::vector<double> apply(std::span<const double> field) const {
    std::vector<double> out(size());
    apply(field, out);
    return out;
  }

 private:
  struct Stencil {
    std::array<std::size_t, 4> index;
    std::array<double, 4> weight;
    int count;
  };

  // Left node and fractional offset; coordinates within 1e-9 cells of a node snap to it.
  static std::pair<std::size_t, double> locate(double x, double dx, std::size_t n) {
    const double s = x / dx;
    const double r = std::round(s);
    if (std::abs(s - r) < 1e-9) return {static_cast<std::size_t>(r) % n, 0.0};
    const double fl = std::floor(s);
    return {static_cast<std::size_t>(fl) % n, s - fl};
  }

  std::vector<Stencil> stencils_;
};

inline std::vector<double> sample_at(const Field1D& f, const Network1D& net) {
  return SampleOperator(net, f.grid()).apply(f.values());
}

inline std::vector<double> sample_at(const Field2D& f, const Network2D& net) {
  return SampleOperator(net, f.grid()).apply(f.values());
}

}  // namespace nudge
