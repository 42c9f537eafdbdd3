#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <numbers>
#include <optional>

#include "nudge/core/field.hpp"
#include "nudge/models/model1d.hpp"
#include "nudge/models/navier_stokes.hpp"

namespace nudge {

/// G = F + D with each part callable on its own.
template <class FieldT>
struct SplitRhs {
  std::function<FieldT(const FieldT&)> F;
  std::function<FieldT(const FieldT&)> D;

  FieldT operator()(const FieldT& u) const { return F(u) + D(u); }
};

inline SplitRhs<Field1D> reference_rhs(const ModelSpec& m, const Grid1D& g, DiffScheme scheme) {
  auto op = std::make_shared<Model1D>(m, g, scheme);
  auto wrap = [op](void (Model1D::*fn)(std::span<const double>, std::span<double>)) {
    return [op, fn](const Field1D& u) {
      Field1D out(op->grid());
      ((*op).*fn)(u.values(), out.values());
      return out;
    };
  };
  return {wrap(&Model1D::nondiffusive), wrap(&Model1D::dissipative)};
}

inline SplitRhs<Field1D> reference_rhs(const ModelSpec& m, const Grid1D& g) {
  return reference_rhs(m, g, default_diff_scheme(m));
}

inline SplitRhs<Field2D> reference_rhs(const ModelSpec& m, const Grid2D& g) {
  if (!is_2d(m)) throw Error("reference_rhs: " + model_name(m) + " is one-dimensional");
  auto op = std::make_shared<NavierStokesOperator>(model_mu(m), g);
  auto wrap = [op](void (NavierStokesOperator::*fn)(std::span<const double>, std::span<double>)) {
    return [op, fn](const Field2D& u) {
      Field2D out(op->grid());
      ((*op).*fn)(u.values(), out.values());
      return out;
    };
  };
  return {wrap(&NavierStokesOperator::nondiffusive), wrap(&NavierStokesOperator::dissipative)};
}

/// Interpolated discrepancy on the grid with the analytic derivatives the
/// IDDA right-hand side may need.
struct Discrepancy1D {
  Field1D value;
  std::optional<Field1D> dx;
  std::optional<Field1D> dxx;
};

inline Field1D idda_rhs(const ModelSpec& m, const SchemeSpec& s, const Field1D& v, const Discrepancy1D& d,
                        DiffScheme scheme) {
  if (s.kind != SchemeKind::Idda) throw Error("idda_rhs: scheme kind must be idda");
  Model1D op(m, v.grid(), scheme);
  Field1D out(v.grid());
  auto span_of = [](const std::optional<Field1D>& f) { return f ? f->values() : std::span<const double>{}; };
  op.idda(v.values(), d.value.values(), span_of(d.dx), span_of(d.dxx), s, out.values());
  return out;
}

inline Field1D idda_rhs(const ModelSpec& m, const SchemeSpec& s, const Field1D& v, const Discrepancy1D& d) {
  return idda_rhs(m, s, v, d, default_diff_scheme(m));
}

inline Field1D aot_rhs(const ModelSpec& m, const SchemeSpec& s, const Field1D& v, const Field1D& d,
                       DiffScheme scheme) {
  if (s.kind != SchemeKind::Aot) throw Error("aot_rhs: scheme kind must be aot");
  Model1D op(m, v.grid(), scheme);
  Field1D out(v.grid());
  op.aot(v.values(), d.values(), s.lambda, out.values());
  return out;
}

inline Field1D aot_rhs(const ModelSpec& m, const SchemeSpec& s, const Field1D& v, const Field1D& d) {
  return aot_rhs(m, s, v, d, default_diff_scheme(m));
}

inline Field2D idda_rhs(const ModelSpec& m, const SchemeSpec& s, const Field2D& z, const Field2D& d) {
  if (s.kind != SchemeKind::Idda) throw Error("idda_rhs: scheme kind must be idda");
  if (!is_2d(m)) throw Error("idda_rhs: " + model_name(m) + " is one-dimensional");
  NavierStokesOperator op(model_mu(m), z.grid());
  Field2D out(z.grid());
  op.idda(z.values(), d.values(), s.lambda, s.eta, out.values());
  return out;
}

inline Field2D aot_rhs(const ModelSpec& m, const SchemeSpec& s, const Field2D& z, const Field2D& d) {
  if (s.kind != SchemeKind::Aot) throw Error("aot_rhs: scheme kind must be aot");
  if (!is_2d(m)) throw Error("aot_rhs: " + model_name(m) + " is one-dimensional");
  NavierStokesOperator op(model_mu(m), z.grid());
  Field2D out(z.grid());
  op.aot(z.values(), d.values(), s.lambda, s.eta, out.values());
  return out;
}

enum class IcKind { Reference, Assimilated };

/// Periodic domain of each benchmark: [0,1], [0,1], [0,32 pi], [0,2 pi]^2.
inline double default_length(const ModelSpec& m) {
  using std::numbers::pi;
  switch (m.index()) {
    case 0:
    case 1: return 1.0;
    case 2: return 32.0 * pi;
    default: return 2.0 * pi;
  }
}

inline Field1D initial_condition(const ModelSpec& m, IcKind which, const Grid1D& g) {
  using std::numbers::pi;
  if (is_2d(m)) throw Error("initial_condition: " + model_name(m) + " is two-dimensional");
  if (which == IcKind::Assimilated) return Field1D(g);
  switch (m.index()) {
    case 0:
      return sample_function(g, [](double x) {
        const double c = std::cos(4 * pi * x);
        return 1 + std::sin(2 * pi * x) + c * c;
      });
    case 1: return sample_function(g, [](double x) { return 1 + std::sin(2 * pi * x); });
    default: return sample_function(g, [](double x) { return std::cos(x / 16) * (1 + std::sin(x / 16)); });
  }
}

inline Field2D initial_condition(const ModelSpec& m, IcKind which, const Grid2D& g) {
  using std::numbers::pi;
  if (!is_2d(m)) throw Error("initial_condition: " + model_name(m) + " is one-dimensional");
  if (which == IcKind::Assimilated) return Field2D(g);
  auto bump = [](double x, double y, double x0, double y0, double w) {
    return std::exp(-((x - x0) * (x - x0) + (y - y0) * (y - y0)) / w);
  };
  return sample_function(g, [&](double x, double y) {
    return 50 * bump(x, y, 5 * pi / 4, pi, 0.4) - 50 * bump(x, y, 3 * pi / 4, pi, 0.8) +
           50 * bump(x, y, pi, 3 * pi / 2, 0.4) - 50 * bump(x, y, pi, pi / 2, 0.8);
  });
}

}  // namespace nudge
