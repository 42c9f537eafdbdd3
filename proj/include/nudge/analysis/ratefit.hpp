#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "json.hpp"

#include "nudge/analysis/series.hpp"

namespace nudge {

enum class FitStatus { Ok, NoExponentialWindow, NonConvergent };

inline std::string to_string(FitStatus s) {
  switch (s) {
    case FitStatus::Ok: return "ok";
    case FitStatus::NoExponentialWindow: return "no-exponential-window";
    case FitStatus::NonConvergent: return "non-convergent";
  }
  return "?";
}

inline FitStatus parse_fit_status(const std::string& s) {
  if (s == "ok") return FitStatus::Ok;
  if (s == "no-exponential-window") return FitStatus::NoExponentialWindow;
  if (s == "non-convergent") return FitStatus::NonConvergent;
  throw Error("unknown fit status '" + s + "'");
}

/// ln E = intercept - gamma t over [t_lo, t_hi].
struct LineFit {
  double gamma = std::numeric_limits<double>::quiet_NaN();
  double intercept = std::numeric_limits<double>::quiet_NaN();
  double t_lo = std::numeric_limits<double>::quiet_NaN();
  double t_hi = std::numeric_limits<double>::quiet_NaN();
  double r_squared = std::numeric_limits<double>::quiet_NaN();
  std::size_t points = 0;
  FitStatus status = FitStatus::NoExponentialWindow;
};

struct RateFit : LineFit {
  /// Fit over the last part of the window (auto policy only).
  std::optional<LineFit> secondary;
};

struct FitPolicy {
  /// Samples before E first drops below transient_factor * E(0) are skipped.
  double transient_factor = 0.9;
  /// Samples from the first E below max(plateau_abs, plateau_rel * E(0)) on are skipped.
  double plateau_abs = 1e-10;
  double plateau_rel = 1e-12;
  /// Windows shorter than this fraction of the series span are non-convergent.
  double min_window_fraction = 0.2;
  /// The secondary fit covers this trailing fraction of the window.
  double secondary_fraction = 0.5;
  /// Explicit [t_lo, t_hi] replaces the automatic cuts.
  std::optional<std::pair<double, double>> window;
};

namespace detail {

// Least squares of ln E on t over samples [lo, hi).
inline LineFit fit_log_linear(const ErrorSeries& s, std::size_t lo, std::size_t hi) {
  LineFit f;
  f.points = hi > lo ? hi - lo : 0;
  if (f.points < 4) return f;
  double mt = 0.0, my = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    mt += s.times[i];
    my += std::log(s.errors[i]);
  }
  mt /= static_cast<double>(f.points);
  my /= static_cast<double>(f.points);
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const double dt = s.times[i] - mt, dy = std::log(s.errors[i]) - my;
    stt += dt * dt;
    sty += dt * dy;
    syy += dy * dy;
  }
  const double slope = sty / stt;
  f.gamma = -slope;
  f.intercept = my - slope * mt;
  f.t_lo = s.times[lo];
  f.t_hi = s.times[hi - 1];
  f.r_squared = syy > 0.0 ? std::min(1.0, sty * sty / (stt * syy)) : 1.0;
  f.status = slope < 0.0 ? FitStatus::Ok : FitStatus::NonConvergent;
  return f;
}

}  // namespace detail

/// Exponential rate of an error series. The automatic window drops the
/// initial transient and the round-off plateau; see FitPolicy.
inline RateFit fit_rate(const ErrorSeries& s, const FitPolicy& p = {}) {
  s.validate();
  RateFit r;
  const std::size_t n = s.size();
  if (n < 2) return r;

  if (p.window) {
    const auto [a, b] = *p.window;
    std::size_t lo = 0;
    while (lo < n && s.times[lo] < a) ++lo;
    std::size_t hi = lo;
    while (hi < n && s.times[hi] <= b && s.errors[hi] > 0.0) ++hi;
    static_cast<LineFit&>(r) = detail::fit_log_linear(s, lo, hi);
    return r;
  }

  const double e0 = s.errors[0];
  if (!(e0 > 0.0)) return r;
  std::size_t lo = 0;
  while (lo < n && !(s.errors[lo] < p.transient_factor * e0)) ++lo;
  if (lo == n) {
    // never left the neighbourhood of E(0): report the whole-series trend
    static_cast<LineFit&>(r) = detail::fit_log_linear(s, 0, n);
    r.status = FitStatus::NonConvergent;
    return r;
  }
  const double floor = std::max(p.plateau_abs, p.plateau_rel * e0);
  std::size_t hi = lo;
  while (hi < n && !(s.errors[hi] < floor)) ++hi;

  static_cast<LineFit&>(r) = detail::fit_log_linear(s, lo, hi);
  if (r.points < 4) return r;
  const double span = s.times.back() - s.times.front();
  if (r.t_hi - r.t_lo < p.min_window_fraction * span) r.status = FitStatus::NonConvergent;

  const double t_cut = r.t_hi - p.secondary_fraction * (r.t_hi - r.t_lo);
  std::size_t mid = lo;
  while (mid < hi && s.times[mid] < t_cut) ++mid;
  r.secondary = detail::fit_log_linear(s, mid, hi);
  return r;
}

inline nlohmann::json to_json(const LineFit& f) {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"gamma", num(f.gamma)},         {"intercept", num(f.intercept)}, {"t_lo", num(f.t_lo)},
          {"t_hi", num(f.t_hi)},           {"r_squared", num(f.r_squared)}, {"points", f.points},
          {"status", to_string(f.status)}};
}

inline nlohmann::json to_json(const RateFit& f) {
  auto j = to_json(static_cast<const LineFit&>(f));
  j["secondary"] = f.secondary ? to_json(*f.secondary) : nlohmann::json(nullptr);
  return j;
}

}  // namespace nudge
