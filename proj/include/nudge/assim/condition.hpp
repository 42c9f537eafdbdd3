#pragma once

#include <cmath>
#include <span>

#include "nudge/models/rhs.hpp"

namespace nudge {

struct ConditionReport {
  SchemeKind kind = SchemeKind::Idda;
  double lambda_lower = 0.0;
  double lambda_upper = 0.0;
  bool feasible = false;
  double gamma_predicted = 0.0;
  double L = 0.0, C = 0.0, h = 0.0, mu = 0.0, eta = 0.0, kappa = 1.0, alpha = 0.5, lambda = 0.0;
};

/// Sufficient window for lambda and the predicted rate.
/// IDDA: L^2 C^2 h^2 / (2 alpha mu') < lambda < mu' / (C^2 h^2), mu' = mu + eta kappa,
///       gamma = lambda alpha - L^2 C^2 h^2 / (2 mu').
/// AOT:  L / alpha < lambda < 2 mu / (C^2 h^2), gamma = lambda alpha - L.
inline ConditionReport check_condition(SchemeKind kind, double L, double C, double h, double mu, double eta,
                                       double kappa, double alpha, double lambda) {
  ConditionReport r{kind, 0, 0, false, 0, L, C, h, mu, eta, kappa, alpha, lambda};
  const double c2h2 = C * C * h * h;
  if (kind == SchemeKind::Idda) {
    const double mu_eff = mu + eta * kappa;
    r.lambda_lower = L * L * c2h2 / (2.0 * alpha * mu_eff);
    r.lambda_upper = mu_eff / c2h2;
    r.gamma_predicted = lambda * alpha - L * L * c2h2 / (2.0 * mu_eff);
  } else {
    r.lambda_lower = L / alpha;
    r.lambda_upper = 2.0 * mu / c2h2;
    r.gamma_predicted = lambda * alpha - L;
  }
  r.feasible = r.lambda_lower < lambda && lambda < r.lambda_upper;
  return r;
}

/// Largest |F[u] - F[w]| / |u - w| over all pairs; a lower bound on the
/// Lipschitz constant of the non-diffusive part. Identical pairs are skipped.
template <class FieldT>
double estimate_lipschitz(const SplitRhs<FieldT>& rhs, std::span<const FieldT> fields) {
  if (fields.size() < 2) throw Error("estimate_lipschitz: at least two fields required");
  std::vector<FieldT> f;
  for (const auto& u : fields) f.push_back(rhs.F(u));
  double L = 0.0;
  for (std::size_t a = 0; a < fields.size(); ++a)
    for (std::size_t b = a + 1; b < fields.size(); ++b) {
      const double den = l2_distance(fields[a], fields[b]);
      if (den == 0.0) continue;
      L = std::max(L, l2_distance(f[a], f[b]) / den);
    }
  return L;
}

inline double estimate_lipschitz(const ModelSpec& m, std::span<const Field1D> fields) {
  if (fields.empty()) throw Error("estimate_lipschitz: at least two fields required");
  return estimate_lipschitz(reference_rhs(m, fields[0].grid()), fields);
}

inline double estimate_lipschitz(const ModelSpec& m, std::span<const Field2D> fields) {
  if (fields.empty()) throw Error("estimate_lipschitz: at least two fields required");
  return estimate_lipschitz(reference_rhs(m, fields[0].grid()), fields);
}

}  // namespace nudge
