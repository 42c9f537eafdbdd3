#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "nudge/analysis/ratefit.hpp"
#include "nudge/assim/twin.hpp"

namespace nudge {

struct SweepRow {
  double param_value = 0.0;
  std::string scheme;
  RateFit fit;
  /// "ok" or the run status when the run itself failed.
  std::string run_status = "ok";

  /// Fit status unless the run failed.
  std::string status() const { return run_status == "ok" ? to_string(fit.status) : run_status; }
};

struct SweepTable {
  std::string parameter;
  std::vector<SweepRow> rows;

  std::vector<double> values() const {
    std::vector<double> v;
    for (const auto& r : rows)
      if (v.empty() || v.back() != r.param_value) v.push_back(r.param_value);
    return v;
  }

  const SweepRow* find(double value, const std::string& scheme) const {
    for (const auto& r : rows)
      if (r.param_value == value && r.scheme == scheme) return &r;
    return nullptr;
  }
};

struct SweepEntry {
  double param_value;
  std::string scheme;
  const TwinResult* result;
};

/// Fits every run; rows are ordered by parameter value, then scheme name.
inline SweepTable build_sweep(const std::string& parameter, const std::vector<SweepEntry>& entries,
                              const FitPolicy& policy = {}) {
  SweepTable t{parameter, {}};
  std::map<std::pair<double, std::string>, const TwinResult*> keyed;
  for (const auto& e : entries)
    if (!keyed.emplace(std::make_pair(e.param_value, e.scheme), e.result).second)
      throw Error("build_sweep: duplicate entry for " + parameter + " = " + std::to_string(e.param_value) + ", " +
                  e.scheme);
  for (const auto& [key, res] : keyed) {
    SweepRow row{key.first, key.second, {}, to_string(res->status)};
    if (res->error_series.size() > 0) row.fit = fit_rate(res->error_series, policy);
    t.rows.push_back(std::move(row));
  }
  return t;
}

inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string to_csv(const SweepTable& t) {
  std::string s = "param_value,scheme,gamma,r_squared,t_lo,t_hi,status\n";
  for (const auto& r : t.rows)
    s += format_double(r.param_value) + "," + r.scheme + "," + format_double(r.fit.gamma) + "," +
         format_double(r.fit.r_squared) + "," + format_double(r.fit.t_lo) + "," + format_double(r.fit.t_hi) + "," +
         r.status() + "\n";
  return s;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s) {
  std::size_t pos = 0;
  double v;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw Error("not a number: '" + s + "'");
  }
  if (pos != s.size()) throw Error("not a number: '" + s + "'");
  return v;
}

/// Inverse of to_csv; the secondary fit is not part of the CSV.
inline SweepTable sweep_from_csv(const std::string& text, const std::string& parameter = "") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "param_value,scheme,gamma,r_squared,t_lo,t_hi,status")
    throw Error("sweep csv: unexpected header");
  SweepTable t{parameter, {}};
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = split_csv_line(line);
    if (c.size() != 7) throw Error("sweep csv: expected 7 columns in '" + line + "'");
    SweepRow r;
    r.param_value = parse_double(c[0]);
    r.scheme = c[1];
    r.fit.gamma = parse_double(c[2]);
    r.fit.r_squared = parse_double(c[3]);
    r.fit.t_lo = parse_double(c[4]);
    r.fit.t_hi = parse_double(c[5]);
    if (c[6] == "blow-up" || c[6] == "solver-failure") r.run_status = c[6];
    else r.fit.status = parse_fit_status(c[6]);
    t.rows.push_back(std::move(r));
  }
  return t;
}

inline nlohmann::json to_json(const SweepTable& t) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : t.rows) {
    auto j = to_json(r.fit);
    j["param_value"] = r.param_value;
    j["scheme"] = r.scheme;
    j["run_status"] = r.run_status;
    j["status"] = r.status();
    rows.push_back(std::move(j));
  }
  return {{"parameter", t.parameter}, {"rows", rows}};
}

}  // namespace nudge
