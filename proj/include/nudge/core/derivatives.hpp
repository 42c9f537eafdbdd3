#pragma once

#include <span>
#include <string>

#include "nudge/core/field.hpp"
#include "nudge/core/spectral.hpp"

namespace nudge {

enum class DiffScheme { CentralFd, Spectral };

inline std::string to_string(DiffScheme s) { return s == DiffScheme::Spectral ? "spectral" : "fd"; }

inline void check_derivative_order(int order) {
  if (order != 1 && order != 2 && order != 4)
    throw Error("derivative order " + std::to_string(order) + " unsupported (1, 2 or 4)");
}

namespace fd {

/// Second-order central differences on a periodic grid; order 1, 2 or 4.
inline void derivative(std::span<const double> f, double dx, int order, std::span<double> out) {
  check_derivative_order(order);
  const std::size_t n = f.size();
  if (n < 5) throw Error("fd::derivative: at least 5 grid points required");
  // f with two ghost cells on each side
  auto at = [&](std::size_t i, std::ptrdiff_t o) {
    const auto j = static_cast<std::ptrdiff_t>(i) + o;
    const auto m = static_cast<std::ptrdiff_t>(n);
    return f[static_cast<std::size_t>(j < 0 ? j + m : (j >= m ? j - m : j))];
  };
  auto sweep = [&](auto&& stencil) {
    for (std::size_t i : {std::size_t{0}, std::size_t{1}}) out[i] = stencil(i, at);
    const double* p = f.data();
    auto direct = [p](std::size_t i, std::ptrdiff_t o) { return p[static_cast<std::ptrdiff_t>(i) + o]; };
    for (std::size_t i = 2; i + 2 < n; ++i) out[i] = stencil(i, direct);
    for (std::size_t i = n - 2; i < n; ++i) out[i] = stencil(i, at);
  };
  if (order == 1) {
    const double c = 0.5 / dx;
    sweep([c](std::size_t i, auto&& g) { return c * (g(i, 1) - g(i, -1)); });
  } else if (order == 2) {
    const double c = 1.0 / (dx * dx);
    sweep([c](std::size_t i, auto&& g) { return c * (g(i, 1) - 2.0 * g(i, 0) + g(i, -1)); });
  } else {
    const double c = 1.0 / (dx * dx * dx * dx);
    sweep([c](std::size_t i, auto&& g) {
      return c * (g(i, 2) - 4.0 * g(i, 1) + 6.0 * g(i, 0) - 4.0 * g(i, -1) + g(i, -2));
    });
  }
}

}  // namespace fd

/// Periodic derivative of a 1D field.
inline Field1D diff_periodic(const Field1D& f, int order, DiffScheme scheme) {
  check_derivative_order(order);
  std::vector<double> out(f.size());
  if (scheme == DiffScheme::CentralFd) {
    fd::derivative(f.values(), f.grid().dx(), order, out);
  } else {
    Spectral1D sp(f.grid());
    sp.derivative(f.values(), order, out);
  }
  return Field1D(f.grid(), std::move(out));
}

}  // namespace nudge
