#pragma once

#include <span>
#include <vector>

#include "nudge/core/errors.hpp"

namespace nudge {

/// Thomas algorithm. a: sub-diagonal (a[0] unused), b: diagonal,
/// c: super-diagonal (c[n-1] unused).
inline std::vector<double> solve_tridiagonal(std::span<const double> a, std::span<const double> b,
                                             std::span<const double> c, std::span<const double> r) {
  const std::size_t n = b.size();
  std::vector<double> cp(n), x(n);
  if (b[0] == 0.0) throw Error("solve_tridiagonal: zero pivot");
  double beta = b[0];
  x[0] = r[0] / beta;
  for (std::size_t i = 1; i < n; ++i) {
    cp[i] = c[i - 1] / beta;
    beta = b[i] - a[i] * cp[i];
    if (beta == 0.0) throw Error("solve_tridiagonal: zero pivot");
    x[i] = (r[i] - a[i] * x[i - 1]) / beta;
  }
  for (std::size_t i = n - 1; i-- > 0;) x[i] -= cp[i + 1] * x[i + 1];
  return x;
}

/// Cyclic tridiagonal solve via Sherman-Morrison. `corner_low` is A[n-1][0]
/// and `corner_high` is A[0][n-1]; requires n >= 3.
inline std::vector<double> solve_cyclic_tridiagonal(std::span<const double> a, std::span<const double> b,
                                                    std::span<const double> c, double corner_low,
                                                    double corner_high, std::span<const double> r) {
  const std::size_t n = b.size();
  if (n < 3) throw Error("solve_cyclic_tridiagonal: n must be >= 3");
  const double gamma = -b[0];
  std::vector<double> bb(b.begin(), b.end());
  bb[0] = b[0] - gamma;
  bb[n - 1] = b[n - 1] - corner_low * corner_high / gamma;
  auto x = solve_tridiagonal(a, bb, c, r);
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = corner_low;
  auto z = solve_tridiagonal(a, bb, c, u);
  const double fact = (x[0] + corner_high * x[n - 1] / gamma) / (1.0 + z[0] + corner_high * z[n - 1] / gamma);
  for (std::size_t i = 0; i < n; ++i) x[i] -= fact * z[i];
  return x;
}

}  // namespace nudge
