#pragma once

#include <string>
#include <variant>

#include "nudge/core/derivatives.hpp"
#include "nudge/core/errors.hpp"
#include "nudge/interp/network.hpp"

namespace nudge {

struct Burgers {
  double mu = 0.001;
};

/// Reaction -r u (u-1)(u-2); the roots are fixed.
struct KppBurgers {
  double mu = 0.01;
  double r = 10.0;
};

/// u_t = -u u_x - 2 u_xx - u_xxxx.
struct KuramotoSivashinsky {};

/// Vorticity form on a periodic rectangle.
struct NavierStokes2D {
  double mu = 1e-4;
};

using ModelSpec = std::variant<Burgers, KppBurgers, KuramotoSivashinsky, NavierStokes2D>;

inline std::string model_name(const ModelSpec& m) {
  switch (m.index()) {
    case 0: return "burgers";
    case 1: return "kpp";
    case 2: return "ks";
    default: return "ns2d";
  }
}

inline bool is_2d(const ModelSpec& m) noexcept { return std::holds_alternative<NavierStokes2D>(m); }

/// Viscosity of the dissipative part; KS has none and returns 0.
inline double model_mu(const ModelSpec& m) {
  return std::visit(
      [](const auto& x) -> double {
        if constexpr (requires { x.mu; }) return x.mu;
        else return 0.0;
      },
      m);
}

enum class SchemeKind { Aot, Idda };

/// How the nonlinear term sees the discrepancy under IDDA. GradientOfModelOnly
/// keeps the transported gradient on v alone, -(v + d) v_x.
enum class NonlinearMode { FullSubstitution, GradientOfModelOnly };

inline std::string to_string(SchemeKind k) { return k == SchemeKind::Aot ? "aot" : "idda"; }
inline std::string to_string(NonlinearMode m) {
  return m == NonlinearMode::FullSubstitution ? "full" : "gradient-of-model";
}

struct SchemeSpec {
  SchemeKind kind = SchemeKind::Idda;
  double lambda = 2.0;
  double eta = 0.0;
  NonlinearMode nonlinear_mode = NonlinearMode::FullSubstitution;
};

/// The paper's variant for each model and interpolation method.
inline NonlinearMode default_nonlinear_mode(const ModelSpec& m, InterpMethod method) {
  if (std::holds_alternative<Burgers>(m)) return NonlinearMode::GradientOfModelOnly;
  if (std::holds_alternative<KppBurgers>(m) && method == InterpMethod::Linear)
    return NonlinearMode::GradientOfModelOnly;
  return NonlinearMode::FullSubstitution;
}

/// Throws Error naming the offending field.
inline void validate(const ModelSpec& m) {
  std::visit(
      [](const auto& x) {
        if constexpr (requires { x.mu; })
          if (!(x.mu > 0.0)) throw ConfigError("model.mu", "must be positive");
      },
      m);
}

inline void validate(const SchemeSpec& s, const ModelSpec& m, InterpMethod method) {
  if (!(s.lambda >= 0.0)) throw ConfigError("scheme.lambda", "must be non-negative");
  if (!(s.eta >= 0.0)) throw ConfigError("scheme.eta", "must be non-negative");
  if (s.eta > 0.0 && !is_2d(m)) throw ConfigError("scheme.eta", "artificial diffusion is implemented for ns2d only");
  if (s.kind != SchemeKind::Idda) return;
  const bool ks_or_ns = std::holds_alternative<KuramotoSivashinsky>(m) || is_2d(m);
  if (ks_or_ns && s.nonlinear_mode == NonlinearMode::GradientOfModelOnly)
    throw ConfigError("scheme.nonlinear_mode", "gradient-of-model is defined only for burgers and kpp");
  if (!is_2d(m) && method == InterpMethod::Linear && s.nonlinear_mode == NonlinearMode::FullSubstitution)
    throw ConfigError("scheme.nonlinear_mode", "full substitution differentiates the interpolant; use spline");
}

}  // namespace nudge
