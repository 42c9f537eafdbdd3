#pragma once

#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "nudge/analysis/ratefit.hpp"
#include "nudge/assim/twin.hpp"

namespace nudge {

enum class NetworkKind { Explicit, Equispaced, Halton };

struct NetworkConfig {
  NetworkKind kind = NetworkKind::Equispaced;
  /// Explicit sensors: one coordinate per point in 1D, two in 2D.
  std::vector<std::vector<double>> points;
  std::size_t ns = 0;
  InterpMethod method = InterpMethod::Linear;
  double rho = 5.0;
};

struct SchemeConfig {
  SchemeKind kind = SchemeKind::Idda;
  double lambda = 2.0;
  std::optional<NonlinearMode> nonlinear_mode;
  /// Artificial diffusion, either absolute or as a multiple of h.
  std::optional<double> eta;
  std::optional<double> eta_k;
  /// AOT only: use the IDDA entry's eta.
  bool matched_eta = false;
};

struct ExperimentConfig {
  std::string name = "experiment";
  ModelSpec model = Burgers{};
  Grid grid = Grid1D{1000, 1.0};
  std::optional<DiffScheme> diff;
  NetworkConfig network;
  std::vector<SchemeConfig> schemes;
  double t_end = 4.0;
  double output_dt = 0.05;
  Tolerances tolerances;
  FitPolicy rate_fit;
  std::vector<double> snapshot_times;
  std::optional<double> alpha;
  double blowup_factor = 1e6;
  std::string output_dir = "out";
  /// The validated document, echoed into manifests.
  nlohmann::json source;

  bool two_d() const { return std::holds_alternative<Grid2D>(grid); }
};

namespace detail {

class ConfigReader {
 public:
  std::vector<ConfigIssue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

  static std::string join(const std::string& base, const std::string& key) {
    return base.empty() ? key : base + "." + key;
  }

  bool object(const nlohmann::json& j, const std::string& path) {
    if (j.is_object()) return true;
    fail(path, "must be an object");
    return false;
  }

  void known_keys(const nlohmann::json& j, const std::string& path, std::initializer_list<const char*> keys) {
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!allowed.count(it.key())) fail(join(path, it.key()), "unknown key");
  }

  template <class Pred>
  std::optional<double> number(const nlohmann::json& j, const std::string& key, const std::string& path,
                               bool required, Pred ok, const char* domain) {
    const auto p = join(path, key);
    if (!j.contains(key)) {
      if (required) fail(p, "is required");
      return std::nullopt;
    }
    const auto& v = j[key];
    if (!v.is_number()) {
      fail(p, "must be a number");
      return std::nullopt;
    }
    const double x = v.get<double>();
    if (!std::isfinite(x) || !ok(x)) {
      fail(p, std::string("must be ") + domain);
      return std::nullopt;
    }
    return x;
  }

  std::optional<std::size_t> count(const nlohmann::json& j, const std::string& key, const std::string& path,
                                   bool required, std::size_t min) {
    const auto p = join(path, key);
    if (!j.contains(key)) {
      if (required) fail(p, "is required");
      return std::nullopt;
    }
    const auto& v = j[key];
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) {
      fail(p, "must be an integer >= " + std::to_string(min));
      return std::nullopt;
    }
    return static_cast<std::size_t>(v.get<long long>());
  }

  std::optional<std::string> choice(const nlohmann::json& j, const std::string& key, const std::string& path,
                                    bool required, std::initializer_list<const char*> options) {
    const auto p = join(path, key);
    if (!j.contains(key)) {
      if (required) fail(p, "is required");
      return std::nullopt;
    }
    std::string all;
    for (const char* o : options) all += (all.empty() ? "" : ", ") + std::string(o);
    const auto& v = j[key];
    if (v.is_string())
      for (const char* o : options)
        if (v.get<std::string>() == o) return v.get<std::string>();
    fail(p, "must be one of: " + all);
    return std::nullopt;
  }
};

inline bool positive(double x) { return x > 0.0; }
inline bool non_negative(double x) { return x >= 0.0; }

inline ModelSpec read_model(ConfigReader& r, const nlohmann::json& j) {
  if (!r.object(j, "model")) return Burgers{};
  r.known_keys(j, "model", {"type", "mu"});
  const auto type = r.choice(j, "type", "model", true, {"burgers", "kpp", "ks", "ns2d"});
  if (!type) return Burgers{};
  if (*type == "ks") {
    if (j.contains("mu")) r.fail("model.mu", "is not a parameter of ks");
    return KuramotoSivashinsky{};
  }
  const auto mu = r.number(j, "mu", "model", false, positive, "positive");
  if (*type == "burgers") return Burgers{mu.value_or(Burgers{}.mu)};
  if (*type == "kpp") return KppBurgers{mu.value_or(KppBurgers{}.mu)};
  return NavierStokes2D{mu.value_or(NavierStokes2D{}.mu)};
}

inline void read_grid(ConfigReader& r, const nlohmann::json& j, ExperimentConfig& c) {
  if (!r.object(j, "grid")) return;
  const double len = default_length(c.model);
  if (is_2d(c.model)) {
    r.known_keys(j, "grid", {"nx", "ny", "lx", "ly"});
    const auto nx = r.count(j, "nx", "grid", true, 8);
    const auto ny = r.count(j, "ny", "grid", false, 8);
    const auto lx = r.number(j, "lx", "grid", false, positive, "positive");
    const auto ly = r.number(j, "ly", "grid", false, positive, "positive");
    c.grid = Grid2D{nx.value_or(8), ny.value_or(nx.value_or(8)), lx.value_or(len), ly.value_or(lx.value_or(len))};
    return;
  }
  r.known_keys(j, "grid", {"n", "length", "diff"});
  const auto n = r.count(j, "n", "grid", true, 8);
  const auto l = r.number(j, "length", "grid", false, positive, "positive");
  c.grid = Grid1D{n.value_or(8), l.value_or(len)};
  if (const auto d = r.choice(j, "diff", "grid", false, {"fd", "spectral"}))
    c.diff = *d == "fd" ? DiffScheme::CentralFd : DiffScheme::Spectral;
}

inline void read_network(ConfigReader& r, const nlohmann::json& j, ExperimentConfig& c) {
  if (!r.object(j, "network")) return;
  auto& n = c.network;
  const bool two = c.two_d();
  r.known_keys(j, "network", {"kind", "points", "ns", "method", "rho"});
  const auto kind = r.choice(j, "kind", "network", true, {"explicit", "equispaced", "halton"});
  if (kind) n.kind = *kind == "explicit" ? NetworkKind::Explicit
                     : *kind == "equispaced" ? NetworkKind::Equispaced
                                             : NetworkKind::Halton;
  if (const auto m = r.choice(j, "method", "network", false, {"linear", "spline", "rbf"})) {
    n.method = parse_interp_method(*m);
    if (two != (n.method == InterpMethod::RbfWendlandC2))
      r.fail("network.method", two ? "2D networks use rbf" : "1D networks use linear or spline");
  } else {
    n.method = two ? InterpMethod::RbfWendlandC2 : InterpMethod::Linear;
  }
  if (two) {
    n.rho = r.number(j, "rho", "network", false, [](double x) { return x >= 1.0 && x <= 10.0; }, "in [1, 10]")
                .value_or(5.0);
  } else if (j.contains("rho")) {
    r.fail("network.rho", "applies to 2D networks only");
  }
  if (!kind) return;

  if (n.kind == NetworkKind::Explicit) {
    if (j.contains("ns")) r.fail("network.ns", "not used by explicit networks");
    if (!j.contains("points") || !j["points"].is_array() || j["points"].empty()) {
      r.fail("network.points", "must be a non-empty array");
      return;
    }
    const auto& pts = j["points"];
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const auto p = "network.points[" + std::to_string(i) + "]";
      std::vector<double> xy;
      if (pts[i].is_number()) xy = {pts[i].get<double>()};
      else if (pts[i].is_array() && std::all_of(pts[i].begin(), pts[i].end(), [](auto& v) { return v.is_number(); }))
        xy = pts[i].get<std::vector<double>>();
      if (xy.size() != (two ? 2u : 1u)) {
        r.fail(p, two ? "must be [x, y]" : "must be a number");
        continue;
      }
      n.points.push_back(xy);
    }
  } else {
    if (j.contains("points")) r.fail("network.points", "only explicit networks list points");
    if (n.kind == NetworkKind::Halton && !two) r.fail("network.kind", "halton networks are 2D only");
    if (n.kind == NetworkKind::Equispaced && two) r.fail("network.kind", "equispaced networks are 1D only");
    n.ns = r.count(j, "ns", "network", true, 1).value_or(0);
  }
}

inline void read_schemes(ConfigReader& r, const nlohmann::json& j, ExperimentConfig& c) {
  if (!j.is_array() || j.empty()) {
    r.fail("schemes", "must be a non-empty array");
    return;
  }
  std::set<SchemeKind> seen;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto path = "schemes[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!r.object(e, path)) continue;
    r.known_keys(e, path, {"kind", "lambda", "nonlinear_mode", "eta", "eta_k", "matched_eta"});
    SchemeConfig s;
    const auto kind = r.choice(e, "kind", path, true, {"aot", "idda"});
    if (kind) s.kind = *kind == "aot" ? SchemeKind::Aot : SchemeKind::Idda;
    if (kind && !seen.insert(s.kind).second) r.fail(path + ".kind", "duplicate scheme '" + *kind + "'");
    s.lambda = r.number(e, "lambda", path, true, positive, "positive").value_or(1.0);
    if (const auto m = r.choice(e, "nonlinear_mode", path, false, {"full", "gradient-of-model"}))
      s.nonlinear_mode = *m == "full" ? NonlinearMode::FullSubstitution : NonlinearMode::GradientOfModelOnly;
    s.eta = r.number(e, "eta", path, false, non_negative, "non-negative");
    s.eta_k = r.number(e, "eta_k", path, false, [](double x) { return x >= 0.0 && x <= 2.0; }, "in [0, 2]");
    if (s.eta && s.eta_k) r.fail(path + ".eta_k", "give eta or eta_k, not both");
    if (e.contains("matched_eta")) {
      if (!e["matched_eta"].is_boolean()) r.fail(path + ".matched_eta", "must be a boolean");
      else s.matched_eta = e["matched_eta"].get<bool>();
      if (s.matched_eta && s.kind != SchemeKind::Aot) r.fail(path + ".matched_eta", "applies to aot only");
      if (s.matched_eta && (s.eta || s.eta_k)) r.fail(path + ".matched_eta", "conflicts with an explicit eta");
    }
    if ((s.eta || s.eta_k) && !c.two_d()) r.fail(path + ".eta", "artificial diffusion applies to ns2d only");
    c.schemes.push_back(s);
  }
  for (std::size_t i = 0; i < c.schemes.size(); ++i)
    if (c.schemes[i].matched_eta && !seen.count(SchemeKind::Idda))
      r.fail("schemes[" + std::to_string(i) + "].matched_eta", "needs an idda scheme to match");
}

inline void read_tolerances(ConfigReader& r, const nlohmann::json& j, Tolerances& t) {
  if (!r.object(j, "tolerances")) return;
  r.known_keys(j, "tolerances", {"rel_tol", "abs_tol", "max_step"});
  auto unit = [](double x) { return x > 0.0 && x < 1.0; };
  t.rel_tol = r.number(j, "rel_tol", "tolerances", false, unit, "in (0, 1)").value_or(t.rel_tol);
  t.abs_tol = r.number(j, "abs_tol", "tolerances", false, unit, "in (0, 1)").value_or(t.abs_tol);
  t.max_step = r.number(j, "max_step", "tolerances", false, positive, "positive");
}

inline void read_rate_fit(ConfigReader& r, const nlohmann::json& j, FitPolicy& p) {
  const std::string path = "rate_fit";
  if (!r.object(j, path)) return;
  r.known_keys(j, path,
               {"transient_factor", "plateau_abs", "plateau_rel", "min_window_fraction", "secondary_fraction", "window"});
  auto open_unit = [](double x) { return x > 0.0 && x < 1.0; };
  p.transient_factor = r.number(j, "transient_factor", path, false, open_unit, "in (0, 1)").value_or(p.transient_factor);
  p.plateau_abs = r.number(j, "plateau_abs", path, false, non_negative, "non-negative").value_or(p.plateau_abs);
  p.plateau_rel = r.number(j, "plateau_rel", path, false, non_negative, "non-negative").value_or(p.plateau_rel);
  p.min_window_fraction = r.number(j, "min_window_fraction", path, false, [](double x) { return x >= 0 && x <= 1; },
                                   "in [0, 1]")
                              .value_or(p.min_window_fraction);
  p.secondary_fraction = r.number(j, "secondary_fraction", path, false, [](double x) { return x > 0 && x <= 1; },
                                  "in (0, 1]")
                             .value_or(p.secondary_fraction);
  if (j.contains("window")) {
    const auto& w = j["window"];
    if (w.is_array() && w.size() == 2 && w[0].is_number() && w[1].is_number() && w[0].get<double>() < w[1].get<double>())
      p.window = std::make_pair(w[0].get<double>(), w[1].get<double>());
    else
      r.fail(path + ".window", "must be [t_lo, t_hi] with t_lo < t_hi");
  }
}

}  // namespace detail

/// Validates a configuration document. Every problem is reported with its
/// JSON path in one ConfigErrors exception. With `full`, the keys of the
/// optional "full" object replace their top-level counterparts first.
inline ExperimentConfig parse_config(nlohmann::json doc, bool full = false) {
  detail::ConfigReader r;
  ExperimentConfig c;
  if (!doc.is_object()) throw ConfigErrors("$", "configuration must be a JSON object");
  if (doc.contains("full")) {
    if (!doc["full"].is_object()) r.fail("full", "must be an object");
    else if (full) doc.merge_patch(doc["full"]);
    doc.erase("full");
  }
  r.known_keys(doc, "", {"name", "model", "grid", "network", "schemes", "t_end", "output_dt", "tolerances", "rate_fit",
                         "snapshot_times", "alpha", "blowup_factor", "output_dir"});
  if (doc.contains("name")) {
    if (doc["name"].is_string() && !doc["name"].get<std::string>().empty()) c.name = doc["name"];
    else r.fail("name", "must be a non-empty string");
  }
  if (doc.contains("output_dir")) {
    if (doc["output_dir"].is_string() && !doc["output_dir"].get<std::string>().empty()) c.output_dir = doc["output_dir"];
    else r.fail("output_dir", "must be a non-empty string");
  } else {
    c.output_dir = "out/" + c.name;
  }

  if (!doc.contains("model")) r.fail("model", "is required");
  else c.model = detail::read_model(r, doc["model"]);
  if (!doc.contains("grid")) r.fail("grid", "is required");
  else detail::read_grid(r, doc["grid"], c);
  if (!doc.contains("network")) r.fail("network", "is required");
  else detail::read_network(r, doc["network"], c);
  if (!doc.contains("schemes")) r.fail("schemes", "is required");
  else detail::read_schemes(r, doc["schemes"], c);

  const auto t_end = r.number(doc, "t_end", "", true, detail::positive, "positive");
  const auto dt = r.number(doc, "output_dt", "", true, detail::positive, "positive");
  if (t_end) c.t_end = *t_end;
  if (dt) c.output_dt = *dt;
  if (t_end && dt && *dt > *t_end * (1 + 1e-12)) r.fail("output_dt", "must not exceed t_end");
  if (doc.contains("tolerances")) detail::read_tolerances(r, doc["tolerances"], c.tolerances);
  if (doc.contains("rate_fit")) detail::read_rate_fit(r, doc["rate_fit"], c.rate_fit);
  c.alpha = r.number(doc, "alpha", "", false, [](double x) { return x > 0.0 && x <= 1.0; }, "in (0, 1]");
  c.blowup_factor = r.number(doc, "blowup_factor", "", false, [](double x) { return x > 1.0; }, "greater than 1")
                        .value_or(c.blowup_factor);
  if (doc.contains("snapshot_times")) {
    const auto& s = doc["snapshot_times"];
    if (!s.is_array()) r.fail("snapshot_times", "must be an array");
    else
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto p = "snapshot_times[" + std::to_string(i) + "]";
        if (!s[i].is_number() || s[i].get<double>() < 0.0 || s[i].get<double>() > c.t_end)
          r.fail(p, "must be a time in [0, t_end]");
        else if (!c.snapshot_times.empty() && s[i].get<double>() <= c.snapshot_times.back())
          r.fail(p, "snapshot times must increase");
        else
          c.snapshot_times.push_back(s[i].get<double>());
      }
  }

  // Cross-field checks need the pieces above to be individually valid.
  if (r.issues.empty()) {
    for (std::size_t i = 0; i < c.schemes.size(); ++i) {
      const auto& s = c.schemes[i];
      SchemeSpec spec{s.kind, s.lambda, 0.0,
                      s.nonlinear_mode.value_or(default_nonlinear_mode(c.model, c.network.method))};
      try {
        validate(spec, c.model, c.network.method);
      } catch (const ConfigError& e) {
        auto field = e.path();
        if (field.rfind("scheme.", 0) == 0) field.erase(0, 7);
        r.fail("schemes[" + std::to_string(i) + "]." + field, e.message());
      } catch (const Error& e) {
        r.fail("schemes[" + std::to_string(i) + "]", e.what());
      }
    }
    if (c.network.method == InterpMethod::CubicSpline) {
      const std::size_t ns = c.network.kind == NetworkKind::Explicit ? c.network.points.size() : c.network.ns;
      if (ns < 3) r.fail("network", "spline interpolation needs at least 3 sensors");
    }
    if (c.network.kind == NetworkKind::Explicit) {
      const double lx = c.two_d() ? std::get<Grid2D>(c.grid).lx : std::get<Grid1D>(c.grid).length;
      const double ly = c.two_d() ? std::get<Grid2D>(c.grid).ly : 0.0;
      for (std::size_t i = 0; i < c.network.points.size(); ++i) {
        const auto& p = c.network.points[i];
        if (!(p[0] >= 0 && p[0] < lx) || (p.size() == 2 && !(p[1] >= 0 && p[1] < ly)))
          r.fail("network.points[" + std::to_string(i) + "]", "outside the periodic domain");
      }
    }
  }
  if (!r.issues.empty()) throw ConfigErrors(std::move(r.issues));
  c.source = std::move(doc);
  return c;
}

inline ExperimentConfig load_config(const std::string& path, bool full = false) {
  std::ifstream in(path);
  if (!in) throw ConfigErrors("$", "cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigErrors("$", std::string("not valid JSON: ") + e.what());
  }
  return parse_config(std::move(doc), full);
}

inline ObservationNetwork build_network(const ExperimentConfig& c) {
  const auto& n = c.network;
  if (!c.two_d()) {
    const double len = std::get<Grid1D>(c.grid).length;
    if (n.kind == NetworkKind::Equispaced) return equispaced_network(n.ns, len, n.method);
    std::vector<double> xs;
    for (const auto& p : n.points) xs.push_back(p[0]);
    return Network1D(std::move(xs), len, n.method);
  }
  const auto& g = std::get<Grid2D>(c.grid);
  if (n.kind == NetworkKind::Halton) return halton_network(n.ns, g.lx, g.ly, n.rho);
  std::vector<Point2> ps;
  for (const auto& p : n.points) ps.push_back({p[0], p[1]});
  return Network2D(std::move(ps), g.lx, g.ly, n.rho);
}

/// Artificial diffusion of scheme `i`: eta, else eta_k * h, else that of the
/// IDDA entry for matched AOT, else 0.
inline double resolve_eta(const ExperimentConfig& c, std::size_t i, double h) {
  const auto& s = c.schemes.at(i);
  if (s.eta) return *s.eta;
  if (s.eta_k) return *s.eta_k * h;
  if (s.matched_eta)
    for (std::size_t k = 0; k < c.schemes.size(); ++k)
      if (c.schemes[k].kind == SchemeKind::Idda) return resolve_eta(c, k, h);
  return 0.0;
}

inline SchemeSpec resolve_scheme(const ExperimentConfig& c, std::size_t i, double h) {
  const auto& s = c.schemes.at(i);
  return {s.kind, s.lambda, resolve_eta(c, i, h),
          s.nonlinear_mode.value_or(default_nonlinear_mode(c.model, c.network.method))};
}

inline TwinExperiment make_experiment(const ExperimentConfig& c, std::size_t scheme_index) {
  TwinExperiment e;
  e.model = c.model;
  e.network = build_network(c);
  e.scheme = resolve_scheme(c, scheme_index, network_h(e.network));
  e.grid = c.grid;
  e.t_end = c.t_end;
  e.output_dt = c.output_dt;
  e.tolerances = c.tolerances;
  e.diff_scheme = c.diff;
  e.snapshot_times = c.snapshot_times;
  e.blowup_factor = c.blowup_factor;
  return e;
}

}  // namespace nudge
