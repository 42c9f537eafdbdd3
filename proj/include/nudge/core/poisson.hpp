#pragma once

#include <utility>

#include "nudge/core/field.hpp"
#include "nudge/core/spectral.hpp"

namespace nudge {

/// Solves -Lap(psi) = omega - mean(omega) spectrally; the result has zero mean.
inline Field2D poisson_solve_2d(const Field2D& omega) {
  const auto& g = omega.grid();
  Spectral2D sp(g);
  std::vector<cplx> s(sp.spectrum_size());
  sp.forward(omega.values(), s);
  const std::size_t h = sp.half_ny();
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < h; ++j) {
      const double k2 = sp.k2(i, j);
      s[i * h + j] = k2 > 0.0 ? s[i * h + j] / k2 : cplx(0.0);
    }
  std::vector<double> psi(g.size());
  sp.inverse(s, psi);
  return Field2D(g, std::move(psi));
}

/// (u, v) = (d psi/dy, -d psi/dx) by spectral differentiation.
inline std::pair<Field2D, Field2D> velocity_from_streamfunction(const Field2D& psi) {
  const auto& g = psi.grid();
  Spectral2D sp(g);
  std::vector<double> u(g.size()), v(g.size());
  sp.derivative(psi.values(), 0, 1, u);
  sp.derivative(psi.values(), 1, 0, v);
  for (auto& x : v) x = -x;
  return {Field2D(g, std::move(u)), Field2D(g, std::move(v))};
}

/// Spectral divergence du/dx + dv/dy.
inline Field2D divergence(const Field2D& u, const Field2D& v) {
  const auto& g = u.grid();
  Spectral2D sp(g);
  std::vector<double> a(g.size()), b(g.size());
  sp.derivative(u.values(), 1, 0, a);
  sp.derivative(v.values(), 0, 1, b);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return Field2D(g, std::move(a));
}

}  // namespace nudge
