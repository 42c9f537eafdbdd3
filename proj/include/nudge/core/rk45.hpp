#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nudge/core/errors.hpp"
#include "nudge/core/field.hpp"

namespace nudge {

struct Tolerances {
  double rel_tol = 1e-6;
  double abs_tol = 1e-9;
  std::optional<double> max_step;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw Error("Tolerances: rel_tol must lie in (0, 1)");
    if (!(abs_tol > 0.0 && abs_tol < 1.0)) throw Error("Tolerances: abs_tol must lie in (0, 1)");
    if (max_step && !(*max_step > 0.0)) throw Error("Tolerances: max_step must be positive");
  }
};

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evaluations = 0;
  double t_reached = 0.0;
  bool stopped_by_observer = false;
};

namespace dopri5 {
// Dormand-Prince 5(4) tableau.
inline constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
inline constexpr double a21 = 1.0 / 5;
inline constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
inline constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
inline constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                        a54 = -212.0 / 729;
inline constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
inline constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192,
                        a75 = -2187.0 / 6784, a76 = 11.0 / 84;
// Fifth minus embedded fourth order weights.
inline constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
// Fourth-order continuous extension.
inline constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                        d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                        d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

// PI controller constants.
inline constexpr double beta = 0.04;
inline constexpr double expo = 0.2 - beta * 0.75;
inline constexpr double safety = 0.9;
inline constexpr double shrink_limit = 0.2;
inline constexpr double grow_limit = 10.0;
}  // namespace dopri5

/// Dormand-Prince 5(4) with PI step control and dense output.
///
/// `rhs(t, y, dydt)` fills dydt. `observer(t, y)` is called at every entry of
/// `output_times` (sorted, inside [t0, t1]) with the dense-output state and may
/// return false to stop the integration. The local error test is per component:
/// |err_i| <= abs_tol + rel_tol * max(|y_i|, |ynew_i|).
template <class Rhs, class Observer>
IntegrationStats integrate_dopri5(Rhs&& rhs, std::span<const double> y0, double t0, double t1,
                                  std::span<const double> output_times, const Tolerances& tol,
                                  Observer&& observer, const std::string& label = "ode") {
  using namespace dopri5;
  tol.validate();
  if (!(t1 > t0)) throw Error("integrate: t_span must be increasing");
  for (std::size_t i = 0; i < output_times.size(); ++i) {
    if (output_times[i] < t0 || output_times[i] > t1)
      throw Error("integrate: output time outside t_span");
    if (i > 0 && output_times[i] < output_times[i - 1])
      throw Error("integrate: output times must be sorted");
  }

  const std::size_t n = y0.size();
  std::vector<double> y(y0.begin(), y0.end()), ynew(n), yt(n);
  std::vector<double> k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), r5(n);
  IntegrationStats stats;
  const double span = t1 - t0;
  const double h_floor = 1e-14 * span;
  const double h_max = tol.max_step ? std::min(*tol.max_step, span) : span;

  auto scale = [&](double a, double b) { return tol.abs_tol + tol.rel_tol * std::max(std::abs(a), std::abs(b)); };
  auto eval = [&](double t, std::span<const double> yy, std::span<double> out) {
    rhs(t, yy, out);
    ++stats.rhs_evaluations;
  };

  std::size_t next_out = 0;
  double t = t0;
  while (next_out < output_times.size() && output_times[next_out] <= t0) {
    ++next_out;
    if (!observer(t0, std::span<const double>(y))) {
      stats.stopped_by_observer = true;
      stats.t_reached = t0;
      return stats;
    }
  }

  eval(t, y, k1);

  // Initial step guess (Hairer, Norsett & Wanner, II.4).
  double h;
  {
    double dnf = 0.0, dny = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double sk = scale(y[i], y[i]);
      dnf = std::max(dnf, std::abs(k1[i]) / sk);
      dny = std::max(dny, std::abs(y[i]) / sk);
    }
    h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, h_max);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * k1[i];
    eval(t + h, yt, k2);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) der2 = std::max(der2, std::abs(k2[i] - k1[i]) / scale(y[i], y[i]));
    der2 /= h;
    const double der12 = std::max(der2, std::sqrt(dnf));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    h = std::min({100.0 * h, h1, h_max});
    if (!std::isfinite(h) || h <= 0.0) h = 1e-6 * span;
  }

  double err_old = 1e-4;
  bool last_rejected = false;

  while (t < t1) {
    if (t + 1.01 * h >= t1) h = t1 - t;
    h = std::min(h, h_max);

    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * a21 * k1[i];
    eval(t + c2 * h, yt, k2);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    eval(t + c3 * h, yt, k3);
    for (std::size_t i = 0; i < n; ++i) yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    eval(t + c4 * h, yt, k4);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    eval(t + c5 * h, yt, k5);
    for (std::size_t i = 0; i < n; ++i)
      yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    const double t_new = (h == t1 - t) ? t1 : t + h;
    eval(t_new, yt, k6);
    for (std::size_t i = 0; i < n; ++i)
      ynew[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    eval(t_new, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      err = std::max(err, std::abs(e) / scale(y[i], ynew[i]));
    }
    if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

    const double fac11 = std::pow(err, expo);
    double h_new;
    if (err <= 1.0) {
      ++stats.accepted;
      // Dense output for the outputs inside (t, t_new].
      if (next_out < output_times.size() && output_times[next_out] <= t_new) {
        for (std::size_t i = 0; i < n; ++i)
          r5[i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
        while (next_out < output_times.size() && output_times[next_out] <= t_new) {
          const double to = output_times[next_out++];
          std::span<const double> state;
          if (to == t_new) {
            state = ynew;
          } else {
            const double th = (to - t) / h, th1 = 1.0 - th;
            for (std::size_t i = 0; i < n; ++i) {
              const double ydiff = ynew[i] - y[i];
              const double bspl = h * k1[i] - ydiff;
              const double c4v = ydiff - h * k7[i] - bspl;
              yt[i] = y[i] + th * (ydiff + th1 * (bspl + th * (c4v + th1 * r5[i])));
            }
            state = yt;
          }
          if (!observer(to, state)) {
            stats.stopped_by_observer = true;
            stats.t_reached = to;
            return stats;
          }
        }
      }
      std::swap(y, ynew);
      std::swap(k1, k7);
      t = t_new;

      double fac = fac11 / std::pow(err_old, beta);
      fac = std::clamp(fac / safety, 1.0 / grow_limit, 1.0 / shrink_limit);
      h_new = h / fac;
      if (last_rejected) h_new = std::min(h_new, h);
      err_old = std::max(err, 1e-4);
      last_rejected = false;
    } else {
      ++stats.rejected;
      h_new = std::isfinite(fac11) ? h / std::min(1.0 / shrink_limit, fac11 / safety) : h * shrink_limit;
      last_rejected = true;
    }
    if (t < t1 && h_new < h_floor) throw StiffnessError(label, t, h_new);
    h = h_new;
  }
  stats.t_reached = t;
  return stats;
}

/// Integrates y' = rhs(t, y) over t_span and returns the states at output_times.
inline Trajectory integrate_rk45(
    const std::function<void(double, std::span<const double>, std::span<double>)>& rhs,
    std::span<const double> y0, std::pair<double, double> t_span, const Tolerances& tol,
    std::span<const double> output_times) {
  Trajectory traj;
  integrate_dopri5(rhs, y0, t_span.first, t_span.second, output_times, tol,
                   [&](double t, std::span<const double> y) {
                     traj.times.push_back(t);
                     traj.states.emplace_back(y.begin(), y.end());
                     return true;
                   });
  return traj;
}

/// Field overload: rhs maps a field to its time derivative.
template <class G>
std::vector<BasicField<G>> integrate_rk45(
    const std::function<BasicField<G>(double, const BasicField<G>&)>& rhs, const BasicField<G>& y0,
    std::pair<double, double> t_span, const Tolerances& tol, std::span<const double> output_times) {
  const G grid = y0.grid();
  auto flat = [&](double t, std::span<const double> y, std::span<double> dy) {
    BasicField<G> f(grid, std::vector<double>(y.begin(), y.end()));
    const auto r = rhs(t, f);
    std::copy(r.values().begin(), r.values().end(), dy.begin());
  };
  const auto traj = integrate_rk45(flat, y0.values(), t_span, tol, output_times);
  std::vector<BasicField<G>> out;
  out.reserve(traj.states.size());
  for (const auto& s : traj.states) out.emplace_back(grid, s);
  return out;
}

}  // namespace nudge
