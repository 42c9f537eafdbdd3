#pragma once

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"

#include "nudge/analysis/ratefit.hpp"
#include "nudge/analysis/sweep.hpp"
#include "nudge/assim/condition.hpp"
#include "nudge/assim/twin.hpp"
#include "nudge/experiments/canned.hpp"
#include "nudge/experiments/config.hpp"
#include "nudge/interp/diagnostics.hpp"

namespace nudge {

inline constexpr const char* kVersion = "0.1.0";

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitInvalid = 2, kExitSolver = 3 };

inline std::string iso8601_now() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Writes through a temporary file and a rename, so readers never see a
/// partial file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& text) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << text;
    if (!out) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, path);
}

/// NUDGE_LAB_THREADS when set, else `requested`, else the number of logical CPUs.
inline std::size_t resolve_workers(std::optional<std::size_t> requested = std::nullopt) {
  if (const char* env = std::getenv("NUDGE_LAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  if (requested && *requested > 0) return *requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls job(i) for i in [0, n) on up to `workers` threads.
inline void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& job) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

struct SchemeRun {
  std::string scheme;
  SchemeSpec spec;
  TwinResult result;
  RateFit fit;
};

/// Runs every scheme of the config; results are ordered by scheme name.
inline std::vector<SchemeRun> run_schemes(const ExperimentConfig& c, std::size_t workers = 1) {
  std::vector<SchemeRun> runs(c.schemes.size());
  parallel_for(runs.size(), workers, [&](std::size_t i) {
    const auto e = make_experiment(c, i);
    runs[i].scheme = to_string(e.scheme.kind);
    runs[i].spec = e.scheme;
    runs[i].result = run_twin(e);
    runs[i].fit = fit_rate(runs[i].result.error_series, c.rate_fit);
  });
  std::sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.scheme < b.scheme; });
  return runs;
}

/// `time,error_<scheme>...` with one row per output time. A run that stopped
/// early leaves its later cells empty.
inline std::string error_series_csv(const std::vector<SchemeRun>& runs) {
  std::string s = "time";
  if (runs.size() == 1) s += ",error";
  else
    for (const auto& r : runs) s += ",error_" + r.scheme;
  s += "\n";
  const ErrorSeries* longest = nullptr;
  for (const auto& r : runs)
    if (!longest || r.result.error_series.size() > longest->size()) longest = &r.result.error_series;
  if (!longest) return s;
  for (std::size_t i = 0; i < longest->size(); ++i) {
    s += format_double(longest->times[i]);
    for (const auto& r : runs) {
      s += ",";
      if (i < r.result.error_series.size()) s += format_double(r.result.error_series.errors[i]);
    }
    s += "\n";
  }
  return s;
}

inline std::string error_series_filename(const std::vector<SchemeRun>& runs) {
  return runs.size() == 1 ? "error_series_" + runs[0].scheme + ".csv" : "error_series.csv";
}

namespace detail {

inline std::string snapshot_header(const std::string& first, const std::vector<double>& times) {
  std::string s = first;
  for (double t : times) s += ",u@" + format_double(t) + ",v@" + format_double(t);
  return s + "\n";
}

inline std::string snapshot_csv(const ExperimentConfig& c, const TwinResult& r) {
  const bool two = c.two_d();
  std::string s = snapshot_header(two ? "index" : "x", r.snapshot_times);
  const std::size_t n = r.reference_snapshots.empty() ? 0 : r.reference_snapshots[0].size();
  for (std::size_t i = 0; i < n; ++i) {
    s += two ? std::to_string(i) : format_double(std::get<Grid1D>(c.grid).x(i));
    for (std::size_t k = 0; k < r.snapshot_times.size(); ++k)
      s += "," + format_double(r.reference_snapshots[k][i]) + "," + format_double(r.assimilated_snapshots[k][i]);
    s += "\n";
  }
  return s;
}

inline nlohmann::json snapshot_sidecar(const Grid2D& g, const std::vector<double>& times) {
  return {{"nx", g.nx},
          {"ny", g.ny},
          {"lx", g.lx},
          {"ly", g.ly},
          {"layout", "row-major; index = i * ny + j; x = i * lx / nx, y = j * ly / ny"},
          {"times", times},
          {"fields", {{"u", "reference vorticity"}, {"v", "assimilated vorticity"}}}};
}

inline nlohmann::json run_record(const SchemeRun& r) {
  return {{"scheme", r.scheme},
          {"lambda", r.spec.lambda},
          {"eta", r.spec.eta},
          {"nonlinear_mode", to_string(r.spec.nonlinear_mode)},
          {"status", to_string(r.result.status)},
          {"message", r.result.message},
          {"wall_time", r.result.wall_time},
          {"rhs_evaluations", r.result.stats.rhs_evaluations},
          {"accepted_steps", r.result.stats.accepted},
          {"rejected_steps", r.result.stats.rejected}};
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

/// Writes the run artifacts into `dir` and returns the file names, manifest last.
inline std::vector<std::string> write_run_outputs(const ExperimentConfig& c, const std::vector<SchemeRun>& runs,
                                                  const std::filesystem::path& dir, const std::string& started) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  auto put = [&](const std::string& name, const std::string& text) {
    write_file_atomic(dir / name, text);
    files.push_back(name);
  };
  put(error_series_filename(runs), error_series_csv(runs));
  nlohmann::json fits = nlohmann::json::object();
  for (const auto& r : runs) fits[r.scheme] = to_json(r.fit);
  put("ratefit.json", detail::dump(fits));
  for (const auto& r : runs) {
    if (r.result.snapshot_times.empty()) continue;
    put("snapshots_" + r.scheme + ".csv", detail::snapshot_csv(c, r.result));
    if (c.two_d())
      put("snapshots_" + r.scheme + ".json",
          detail::dump(detail::snapshot_sidecar(std::get<Grid2D>(c.grid), r.result.snapshot_times)));
  }
  nlohmann::json m = {{"tool", "nudge_lab"}, {"version", kVersion},   {"command", "run"},
                      {"config", c.source},  {"started", started},   {"finished", iso8601_now()}};
  m["runs"] = nlohmann::json::array();
  for (const auto& r : runs) m["runs"].push_back(detail::run_record(r));
  files.push_back("manifest.json");
  m["files"] = files;
  write_file_atomic(dir / "manifest.json", detail::dump(m));
  return files;
}

inline int report_config_errors(const ConfigErrors& e, std::ostream& err) {
  for (const auto& i : e.issues()) err << "config error: " << i.path << ": " << i.message << "\n";
  return kExitInvalid;
}

inline int cmd_run(const std::string& config, std::optional<std::string> out_dir, bool full, std::ostream& out,
                   std::ostream& err) {
  ExperimentConfig c;
  try {
    c = resolve_config(config, full);
  } catch (const ConfigErrors& e) {
    return report_config_errors(e, err);
  }
  const std::filesystem::path dir = out_dir.value_or(c.output_dir);
  const auto started = iso8601_now();
  std::vector<SchemeRun> runs;
  try {
    runs = run_schemes(c, resolve_workers());
    write_run_outputs(c, runs, dir, started);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  int code = kExitOk;
  for (const auto& r : runs) {
    out << r.scheme << ": status " << to_string(r.result.status) << ", gamma " << r.fit.gamma << " ("
        << to_string(r.fit.status) << "), wall " << r.result.wall_time << " s\n";
    if (r.result.status == RunStatus::SolverFailure) {
      err << r.scheme << ": solver failure: " << r.result.message << "\n";
      code = kExitSolver;
    } else if (r.result.status == RunStatus::BlowUp) {
      err << r.scheme << ": " << r.result.message << "\n";
    }
  }
  out << "outputs in " << dir.string() << "\n";
  return code;
}

// ---------------------------------------------------------------- sweeps

inline const std::vector<std::string>& sweep_parameters() {
  static const std::vector<std::string> p = {"Ns", "lambda", "rho", "eta_k"};
  return p;
}

/// Value range of a swept parameter for a model; values outside need --force.
inline std::pair<double, double> parameter_range(const ModelSpec& m, const std::string& param) {
  const auto name = model_name(m);
  if (param == "Ns") {
    if (name == "burgers") return {3, 100};
    if (name == "kpp") return {3, 3};
    if (name == "ks") return {8, 80};
    return {100, 1000};
  }
  if (param == "lambda") return name == "kpp" ? std::pair{1.0, 200.0} : std::pair{2.0, 2.0};
  if (param == "rho") return {1, 10};
  return {0, 2};
}

/// Copy of `c` with one parameter replaced.
inline ExperimentConfig apply_parameter(ExperimentConfig c, const std::string& param, double value) {
  if (param == "Ns") {
    if (!(value >= 1 && value == std::floor(value))) throw ConfigErrors("values", "Ns must be a positive integer");
    c.network.kind = c.two_d() ? NetworkKind::Halton : NetworkKind::Equispaced;
    c.network.points.clear();
    c.network.ns = static_cast<std::size_t>(value);
  } else if (param == "lambda") {
    if (!(value > 0)) throw ConfigErrors("values", "lambda must be positive");
    for (auto& s : c.schemes) s.lambda = value;
  } else if (param == "rho") {
    if (!c.two_d()) throw ConfigErrors("param", "rho applies to 2D networks only");
    if (!(value >= 1 && value <= 10)) throw ConfigErrors("values", "rho must lie in [1, 10]");
    c.network.rho = value;
  } else if (param == "eta_k") {
    if (!c.two_d()) throw ConfigErrors("param", "eta_k applies to ns2d only");
    if (!(value >= 0)) throw ConfigErrors("values", "eta_k must be non-negative");
    for (auto& s : c.schemes)
      if (s.kind == SchemeKind::Idda) {
        s.eta.reset();
        s.eta_k = value;
      }
  } else {
    throw ConfigErrors("param", "unknown sweep parameter '" + param + "' (Ns, lambda, rho, eta_k)");
  }
  return c;
}

struct SweepOptions {
  std::string param;
  std::vector<double> values;
  std::optional<std::size_t> workers;
  bool force = false;
  bool full = false;
  std::optional<std::string> out_dir;
};

/// Runs every (value, scheme) pair. The table does not depend on the worker
/// count or completion order.
inline SweepTable run_sweep(const ExperimentConfig& base, const SweepOptions& o,
                            std::vector<std::pair<double, SchemeRun>>* runs_out = nullptr) {
  if (o.values.empty()) throw ConfigErrors("values", "at least one value is required");
  std::vector<ConfigIssue> issues;
  const auto range = parameter_range(base.model, o.param);
  std::vector<ExperimentConfig> configs;
  for (std::size_t i = 0; i < o.values.size(); ++i) {
    const double v = o.values[i];
    if (!o.force && (v < range.first || v > range.second))
      issues.push_back({"values[" + std::to_string(i) + "]", format_double(v) + " is outside [" +
                                                                 format_double(range.first) + ", " +
                                                                 format_double(range.second) + "]; use --force"});
    configs.push_back(apply_parameter(base, o.param, v));
  }
  if (!issues.empty()) throw ConfigErrors(std::move(issues));

  const std::size_t ns = base.schemes.size();
  std::vector<SchemeRun> runs(o.values.size() * ns);
  parallel_for(runs.size(), resolve_workers(o.workers), [&](std::size_t job) {
    const auto& c = configs[job / ns];
    auto& r = runs[job];
    try {
      const auto e = make_experiment(c, job % ns);
      r.scheme = to_string(e.scheme.kind);
      r.spec = e.scheme;
      r.result = run_twin(e);
    } catch (const Error& ex) {
      r.scheme = to_string(c.schemes[job % ns].kind);
      r.result.status = RunStatus::SolverFailure;
      r.result.message = ex.what();
    }
    r.fit = fit_rate(r.result.error_series, c.rate_fit);
  });

  std::vector<SweepEntry> entries;
  for (std::size_t job = 0; job < runs.size(); ++job)
    entries.push_back({o.values[job / ns], runs[job].scheme, &runs[job].result});
  auto table = build_sweep(o.param, entries, base.rate_fit);
  if (runs_out)
    for (std::size_t job = 0; job < runs.size(); ++job) runs_out->emplace_back(o.values[job / ns], runs[job]);
  return table;
}

inline int cmd_sweep(const std::string& config, const SweepOptions& o, std::ostream& out, std::ostream& err) {
  ExperimentConfig c;
  SweepTable table;
  std::vector<std::pair<double, SchemeRun>> runs;
  const auto started = iso8601_now();
  try {
    c = resolve_config(config, o.full);
    table = run_sweep(c, o, &runs);
  } catch (const ConfigErrors& e) {
    return report_config_errors(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  const std::filesystem::path dir = o.out_dir.value_or(c.output_dir + "_sweep_" + o.param);
  try {
    std::filesystem::create_directories(dir);
    write_file_atomic(dir / "sweep.csv", to_csv(table));
    write_file_atomic(dir / "sweep.json", detail::dump(to_json(table)));
    nlohmann::json m = {{"tool", "nudge_lab"}, {"version", kVersion}, {"command", "sweep"},
                        {"config", c.source},  {"parameter", o.param}, {"values", o.values},
                        {"started", started},  {"finished", iso8601_now()}};
    m["runs"] = nlohmann::json::array();
    for (const auto& [v, r] : runs) {
      auto rec = detail::run_record(r);
      rec["param_value"] = v;
      m["runs"].push_back(rec);
    }
    m["files"] = {"sweep.csv", "sweep.json", "manifest.json"};
    write_file_atomic(dir / "manifest.json", detail::dump(m));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  out << to_csv(table);
  std::size_t ok = 0;
  for (const auto& r : table.rows) {
    if (r.run_status == "ok") ++ok;
    else err << o.param << " = " << format_double(r.param_value) << ", " << r.scheme << ": " << r.run_status << "\n";
  }
  return ok > 0 ? kExitOk : kExitSolver;
}

// ---------------------------------------------------------------- check

namespace detail {

/// Sample states for the Lipschitz estimate: the reference initial state, zero,
/// its half and a copy shifted by a quarter of the domain.
inline std::vector<Field1D> lipschitz_samples(const ModelSpec& m, const Grid1D& g) {
  const auto u0 = initial_condition(m, IcKind::Reference, g);
  std::vector<double> shifted(g.n);
  for (std::size_t i = 0; i < g.n; ++i) shifted[i] = u0[(i + g.n / 4) % g.n];
  return {u0, Field1D(g), 0.5 * u0, Field1D(g, shifted)};
}

inline std::vector<Field2D> lipschitz_samples(const ModelSpec& m, const Grid2D& g) {
  const auto u0 = initial_condition(m, IcKind::Reference, g);
  std::vector<double> shifted(g.size());
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.ny; ++j) shifted[g.index(i, j)] = u0[g.index((i + g.nx / 4) % g.nx, j)];
  return {u0, Field2D(g), 0.5 * u0, Field2D(g, shifted)};
}

/// Diffusion constant of the dissipative part against |grad f|^2. For the
/// hyperdiffusion of KS this is the Poincare constant (2 pi / L)^2.
inline double effective_mu(const ModelSpec& m, const Grid& g) {
  if (std::holds_alternative<KuramotoSivashinsky>(m)) {
    const double k = 2.0 * std::numbers::pi / std::get<Grid1D>(g).length;
    return k * k;
  }
  return model_mu(m);
}

}  // namespace detail

struct CheckResult {
  std::string scheme;
  ConditionReport report;
};

inline std::vector<CheckResult> check_config(const ExperimentConfig& c) {
  const auto net = build_network(c);
  const double h = network_h(net);
  double L = 0.0, C = 0.0, kappa = 1.0;
  if (const auto* g1 = std::get_if<Grid1D>(&c.grid)) {
    const auto s = detail::lipschitz_samples(c.model, *g1);
    L = estimate_lipschitz(c.model, std::span<const Field1D>(s));
    const std::vector<double> hs = {h, h / 2};
    C = estimate_interp_constant(c.network.method, g1->length, hs);
    try {
      kappa = kappa_alignment(s[0], net);
    } catch (const InterpolationError&) {
      kappa = 1.0;
    }
  } else {
    const auto& g2 = std::get<Grid2D>(c.grid);
    const auto s = detail::lipschitz_samples(c.model, g2);
    L = estimate_lipschitz(c.model, std::span<const Field2D>(s));
    const std::vector<double> hs = {h, h * std::sqrt(0.5)};
    C = estimate_interp_constant(g2.lx, g2.ly, c.network.rho, hs);
    try {
      kappa = kappa_alignment(s[0], net);
    } catch (const InterpolationError&) {
      kappa = 1.0;
    }
  }
  const double mu = detail::effective_mu(c.model, c.grid);
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < c.schemes.size(); ++i) {
    const auto spec = resolve_scheme(c, i, h);
    out.push_back({to_string(spec.kind), check_condition(spec.kind, L, C, h, mu, spec.eta, kappa,
                                                          c.alpha.value_or(0.5), spec.lambda)});
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.scheme < b.scheme; });
  return out;
}

inline nlohmann::json to_json(const CheckResult& r) {
  const auto& c = r.report;
  return {{"scheme", r.scheme},
          {"lambda", c.lambda},
          {"lambda_lower", c.lambda_lower},
          {"lambda_upper", c.lambda_upper},
          {"feasible", c.feasible},
          {"gamma_predicted", c.gamma_predicted},
          {"L", c.L},
          {"C", c.C},
          {"h", c.h},
          {"mu", c.mu},
          {"eta", c.eta},
          {"kappa", c.kappa},
          {"alpha", c.alpha},
          {"note", c.feasible ? "inside sufficient window" : "outside sufficient window; experiment proceeds"}};
}

inline int cmd_check(const std::string& config, bool full, std::ostream& out, std::ostream& err) {
  try {
    const auto c = resolve_config(config, full);
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : check_config(c)) j.push_back(to_json(r));
    out << j.dump(2) << "\n";
    return kExitOk;
  } catch (const ConfigErrors& e) {
    return report_config_errors(e, err);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

// ---------------------------------------------------------------- rate

/// Reads `time,<error columns>` text. Empty cells end a column.
inline ErrorSeries read_error_csv(const std::string& text, const std::string& column = "") {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ConfigErrors("csv", "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "time") throw ConfigErrors("csv", "header must start with 'time'");
  std::size_t col = 1;
  if (!column.empty()) {
    const auto it = std::find(header.begin(), header.end(), column);
    if (it == header.end() || it == header.begin()) throw ConfigErrors("column", "no column '" + column + "'");
    col = static_cast<std::size_t>(it - header.begin());
  }
  ErrorSeries s;
  std::size_t row = 1;
  bool ended = false;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const auto where = "csv line " + std::to_string(row);
    if (cells.size() != header.size()) throw ConfigErrors(where, "expected " + std::to_string(header.size()) + " cells");
    if (cells[col].empty()) {
      ended = true;
      continue;
    }
    if (ended) throw ConfigErrors(where, "value after the end of the column");
    try {
      s.push_back(parse_double(cells[0]), parse_double(cells[col]));
    } catch (const Error& e) {
      throw ConfigErrors(where, e.what());
    }
  }
  try {
    s.validate();
  } catch (const Error& e) {
    throw ConfigErrors("csv", e.what());
  }
  return s;
}

inline int cmd_rate(const std::string& csv_path, const FitPolicy& policy, const std::string& column, std::ostream& out,
                    std::ostream& err) {
  std::ifstream in(csv_path, std::ios::binary);
  if (!in) {
    err << "error: cannot open '" << csv_path << "'\n";
    return kExitInvalid;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    const auto s = read_error_csv(buf.str(), column);
    out << to_json(fit_rate(s, policy)).dump(2) << "\n";
    return kExitOk;
  } catch (const ConfigErrors& e) {
    return report_config_errors(e, err);
  }
}

}  // namespace nudge
