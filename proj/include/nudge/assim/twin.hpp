#pragma once

#include <chrono>
#include <cmath>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "nudge/analysis/series.hpp"
#include "nudge/core/rk45.hpp"
#include "nudge/interp/interp1d.hpp"
#include "nudge/interp/rbf2d.hpp"
#include "nudge/models/rhs.hpp"

namespace nudge {

struct TwinExperiment {
  ModelSpec model = Burgers{};
  SchemeSpec scheme;
  ObservationNetwork network = equispaced_network(3, 1.0, InterpMethod::Linear);
  Grid grid = Grid1D{1000, 1.0};
  double t_end = 4.0;
  double output_dt = 0.05;
  Tolerances tolerances;
  /// 1D spatial discretisation; the model's default when empty.
  std::optional<DiffScheme> diff_scheme;
  /// Times at which both states are stored, a subset of [0, t_end].
  std::vector<double> snapshot_times;
  /// Abort when E(t) exceeds this multiple of E(0).
  double blowup_factor = 1e6;
  /// Initial assimilated state; zero when empty.
  std::optional<std::vector<double>> v0;
};

enum class RunStatus { Ok, BlowUp, SolverFailure };

inline std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Ok: return "ok";
    case RunStatus::BlowUp: return "blow-up";
    case RunStatus::SolverFailure: return "solver-failure";
  }
  return "?";
}

struct TwinResult {
  ErrorSeries error_series;
  std::vector<double> snapshot_times;
  std::vector<std::vector<double>> reference_snapshots;
  std::vector<std::vector<double>> assimilated_snapshots;
  double wall_time = 0.0;
  RunStatus status = RunStatus::Ok;
  std::string message;
  IntegrationStats stats;
};

/// 0, dt, 2 dt, ... and t_end itself.
inline std::vector<double> output_grid(double t_end, double dt) {
  if (!(t_end > 0.0) || !(dt > 0.0) || dt > t_end * (1 + 1e-12)) throw Error("output_grid: need 0 < dt <= t_end");
  const auto n = static_cast<std::size_t>(std::floor(t_end / dt * (1 + 1e-12)));
  std::vector<double> out;
  for (std::size_t i = 0; i <= n; ++i) out.push_back(std::min(static_cast<double>(i) * dt, t_end));
  if (t_end - out.back() > 1e-9 * t_end) out.push_back(t_end);
  else out.back() = t_end;
  return out;
}

namespace detail {

/// Assembles v_t for one dimension; `u` and `v` are grid vectors.
class Coupling1D {
 public:
  Coupling1D(const TwinExperiment& e, const Grid1D& g, const Network1D& net)
      : model_(e.model, g, e.diff_scheme.value_or(default_diff_scheme(e.model))), scheme_(e.scheme),
        sample_(net, g), interp_(net, g), obs_(net.size()), sv_(net.size()), d_(g.n), dx_(g.n), dxx_(g.n) {
    const bool full = scheme_.kind == SchemeKind::Idda && scheme_.nonlinear_mode == NonlinearMode::FullSubstitution;
    want_dx_ = full;
    want_dxx_ = full && model_.is_ks();
  }

  void reference(std::span<const double> u, std::span<double> du) { model_.reference(u, du); }

  void assimilated(std::span<const double> u, std::span<const double> v, std::span<double> dv) {
    sample_.apply(u, obs_);
    sample_.apply(v, sv_);
    for (std::size_t k = 0; k < obs_.size(); ++k) obs_[k] -= sv_[k];
    interp_.evaluate(obs_, d_, want_dx_ ? std::span<double>(dx_) : std::span<double>{},
                     want_dxx_ ? std::span<double>(dxx_) : std::span<double>{});
    if (scheme_.kind == SchemeKind::Aot) model_.aot(v, d_, scheme_.lambda, dv);
    else model_.idda(v, d_, want_dx_ ? dx_ : std::span<const double>{}, want_dxx_ ? dxx_ : std::span<const double>{},
                     scheme_, dv);
  }

 private:
  Model1D model_;
  SchemeSpec scheme_;
  SampleOperator sample_;
  GridInterpolator1D interp_;
  std::vector<double> obs_, sv_, d_, dx_, dxx_;
  bool want_dx_ = false, want_dxx_ = false;
};

class Coupling2D {
 public:
  Coupling2D(const TwinExperiment& e, const Grid2D& g, const Network2D& net)
      : op_(model_mu(e.model), g), scheme_(e.scheme), sample_(net, g), interp_(net, g), obs_(net.size()),
        sv_(net.size()), d_(g.size()) {}

  void reference(std::span<const double> u, std::span<double> du) { op_.reference(u, du); }

  void assimilated(std::span<const double> u, std::span<const double> v, std::span<double> dv) {
    sample_.apply(u, obs_);
    sample_.apply(v, sv_);
    for (std::size_t k = 0; k < obs_.size(); ++k) obs_[k] -= sv_[k];
    interp_.evaluate(obs_, d_);
    if (scheme_.kind == SchemeKind::Aot) op_.aot(v, d_, scheme_.lambda, scheme_.eta, dv);
    else op_.idda(v, d_, scheme_.lambda, scheme_.eta, dv);
  }

 private:
  NavierStokesOperator op_;
  SchemeSpec scheme_;
  SampleOperator sample_;
  GridInterpolator2D interp_;
  std::vector<double> obs_, sv_, d_;
};

template <class Coupling, class G>
TwinResult run_coupled(const TwinExperiment& e, const G& g, Coupling& c, std::vector<double> u0) {
  const std::size_t n = g.size();
  std::vector<double> y(2 * n, 0.0);
  std::copy(u0.begin(), u0.end(), y.begin());
  if (e.v0) {
    if (e.v0->size() != n) throw Error("run_twin: v0 does not match the grid");
    std::copy(e.v0->begin(), e.v0->end(), y.begin() + static_cast<std::ptrdiff_t>(n));
  }

  const auto grid_times = output_grid(e.t_end, e.output_dt);
  std::vector<double> times = grid_times;
  for (double s : e.snapshot_times) {
    if (s < 0.0 || s > e.t_end) throw Error("run_twin: snapshot time outside [0, t_end]");
    times.push_back(s);
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto is_in = [](const std::vector<double>& list, double t) {
    return std::find(list.begin(), list.end(), t) != list.end();
  };

  TwinResult res;
  const double measure = cell_measure(g);
  double e0 = -1.0;
  auto observer = [&](double t, std::span<const double> s) {
    const auto u = s.subspan(0, n), v = s.subspan(n, n);
    const double err = l2_distance(u, v, measure);
    if (!std::isfinite(err)) throw NonFiniteError("run_twin: non-finite error");
    if (is_in(grid_times, t)) res.error_series.push_back(t, err);
    if (is_in(e.snapshot_times, t)) {
      res.snapshot_times.push_back(t);
      res.reference_snapshots.emplace_back(u.begin(), u.end());
      res.assimilated_snapshots.emplace_back(v.begin(), v.end());
    }
    if (e0 < 0.0) e0 = err;
    if (e0 > 0.0 && err > e.blowup_factor * e0) {
      res.status = RunStatus::BlowUp;
      res.message = "error exceeded " + std::to_string(e.blowup_factor) + " E(0) at t = " + std::to_string(t);
      return false;
    }
    return true;
  };
  auto rhs = [&](double, std::span<const double> s, std::span<double> ds) {
    const auto u = s.subspan(0, n), v = s.subspan(n, n);
    c.reference(u, ds.subspan(0, n));
    c.assimilated(u, v, ds.subspan(n, n));
  };

  const auto start = std::chrono::steady_clock::now();
  try {
    res.stats = integrate_dopri5(rhs, y, 0.0, e.t_end, times, e.tolerances, observer,
                                 model_name(e.model) + "/" + to_string(e.scheme.kind));
  } catch (const StiffnessError& ex) {
    res.status = RunStatus::SolverFailure;
    res.message = ex.what();
  } catch (const NonFiniteError& ex) {
    res.status = RunStatus::BlowUp;
    res.message = ex.what();
  }
  res.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace detail

/// Integrates [u; v] as one system so both see the same adaptive steps; the
/// interpolated discrepancy is rebuilt at every stage. Deterministic.
inline TwinResult run_twin(const TwinExperiment& e) {
  validate(e.model);
  if (!(e.t_end > 0.0)) throw ConfigError("t_end", "must be positive");
  if (!(e.output_dt > 0.0) || e.output_dt > e.t_end * (1 + 1e-12))
    throw ConfigError("output_dt", "must satisfy 0 < output_dt <= t_end");
  if (const auto* g = std::get_if<Grid1D>(&e.grid)) {
    const auto* net = std::get_if<Network1D>(&e.network);
    if (!net || is_2d(e.model)) throw ConfigError("network", "dimension does not match the model");
    validate(e.scheme, e.model, net->method());
    detail::Coupling1D c(e, *g, *net);
    return detail::run_coupled(e, *g, c, initial_condition(e.model, IcKind::Reference, *g).vector());
  }
  const auto& g = std::get<Grid2D>(e.grid);
  const auto* net = std::get_if<Network2D>(&e.network);
  if (!net || !is_2d(e.model)) throw ConfigError("network", "dimension does not match the model");
  validate(e.scheme, e.model, InterpMethod::RbfWendlandC2);
  detail::Coupling2D c(e, g, *net);
  return detail::run_coupled(e, g, c, initial_condition(e.model, IcKind::Reference, g).vector());
}

}  // namespace nudge
