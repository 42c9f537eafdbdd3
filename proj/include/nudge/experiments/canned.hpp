#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "nudge/experiments/config.hpp"

namespace nudge {

namespace detail {

inline const std::map<std::string, const char*>& canned_sources() {
  static const std::map<std::string, const char*> m = {
      {"burgers_fig1", R"({
  "name": "burgers_fig1",
  "model": {"type": "burgers", "mu": 0.001},
  "grid": {"n": 1000, "length": 1.0},
  "network": {"kind": "explicit", "points": [0.16, 0.49, 0.82], "method": "linear"},
  "schemes": [{"kind": "aot", "lambda": 2}, {"kind": "idda", "lambda": 2}],
  "t_end": 4, "output_dt": 0.05,
  "snapshot_times": [0, 1, 4]
})"},
      {"kpp_fig2", R"({
  "name": "kpp_fig2",
  "model": {"type": "kpp", "mu": 0.01},
  "grid": {"n": 1000, "length": 1.0},
  "network": {"kind": "explicit", "points": [0.16, 0.49, 0.82], "method": "spline"},
  "schemes": [{"kind": "aot", "lambda": 4}, {"kind": "idda", "lambda": 4}],
  "t_end": 6, "output_dt": 0.05,
  "snapshot_times": [0, 1, 6]
})"},
      {"kpp_fig2_linear", R"({
  "name": "kpp_fig2_linear",
  "model": {"type": "kpp", "mu": 0.01},
  "grid": {"n": 1000, "length": 1.0},
  "network": {"kind": "explicit", "points": [0.16, 0.49, 0.82], "method": "linear"},
  "schemes": [{"kind": "aot", "lambda": 4}, {"kind": "idda", "lambda": 4}],
  "t_end": 6, "output_dt": 0.05,
  "snapshot_times": [0, 1, 6]
})"},
      {"ks_fig3", R"({
  "name": "ks_fig3",
  "model": {"type": "ks"},
  "grid": {"n": 1024, "diff": "spectral"},
  "network": {"kind": "equispaced", "ns": 64, "method": "spline"},
  "schemes": [{"kind": "aot", "lambda": 2}, {"kind": "idda", "lambda": 2}],
  "t_end": 12, "output_dt": 0.1,
  "snapshot_times": [0, 12],
  "full": {"t_end": 20, "snapshot_times": [0, 20], "rate_fit": {"plateau_abs": 1e-8}}
})"},
      {"ns_fig4", R"({
  "name": "ns_fig4",
  "model": {"type": "ns2d", "mu": 0.0001},
  "grid": {"nx": 128, "ny": 128},
  "network": {"kind": "halton", "ns": 400, "method": "rbf", "rho": 5},
  "schemes": [{"kind": "aot", "lambda": 2}, {"kind": "idda", "lambda": 2, "eta_k": 1}],
  "t_end": 8, "output_dt": 0.1,
  "snapshot_times": [2, 6, 8],
  "full": {"grid": {"nx": 256, "ny": 256}}
})"},
  };
  return m;
}

}  // namespace detail

inline std::vector<std::string> canned_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::canned_sources()) out.push_back(k);
  return out;
}

inline bool is_canned(const std::string& name) { return detail::canned_sources().count(name) > 0; }

/// The raw document of a canned configuration, including its "full" block.
inline nlohmann::json canned_document(const std::string& name) {
  const auto it = detail::canned_sources().find(name);
  if (it == detail::canned_sources().end()) throw ConfigErrors("$", "no canned configuration '" + name + "'");
  return nlohmann::json::parse(it->second);
}

inline ExperimentConfig canned_config(const std::string& name, bool full = false) {
  return parse_config(canned_document(name), full);
}

/// A canned name or a path to a JSON file.
inline ExperimentConfig resolve_config(const std::string& name_or_path, bool full = false) {
  return is_canned(name_or_path) ? canned_config(name_or_path, full) : load_config(name_or_path, full);
}

}  // namespace nudge
