#pragma once

#include <cstddef>
#include <vector>

namespace nudge {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Van der Corput radical inverse of `index` in `base`.
inline double radical_inverse(std::size_t index, std::size_t base) noexcept {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv, r = 0.0;
  while (index > 0) {
    r += f * static_cast<double>(index % base);
    index /= base;
    f *= inv;
  }
  return r;
}

/// First n Halton points (bases 2 and 3, indices 1..n) scaled to [0,lx) x [0,ly).
inline std::vector<Point2> halton_points_2d(std::size_t n, double lx, double ly) {
  std::vector<Point2> pts;
  pts.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) pts.push_back({lx * radical_inverse(i, 2), ly * radical_inverse(i, 3)});
  return pts;
}

}  // namespace nudge
