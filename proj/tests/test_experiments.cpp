#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <regex>
#include <sstream>

#include "nudge/experiments/runner.hpp"

using namespace nudge;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch_dir(const std::string& tag) {
  auto d = fs::temp_directory_path() / ("nudge_test_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

nlohmann::json small_burgers() {
  return nlohmann::json::parse(R"({
    "name": "small",
    "model": {"type": "burgers", "mu": 0.01},
    "grid": {"n": 128},
    "network": {"kind": "equispaced", "ns": 8, "method": "linear"},
    "schemes": [{"kind": "idda", "lambda": 2}, {"kind": "aot", "lambda": 2}],
    "t_end": 0.5, "output_dt": 0.1,
    "snapshot_times": [0, 0.5]
  })");
}

std::vector<ConfigIssue> issues_of(const nlohmann::json& doc) {
  try {
    parse_config(doc);
  } catch (const ConfigErrors& e) {
    return e.issues();
  }
  return {};
}

SweepOptions sweep_of(const std::string& param, std::vector<double> values, bool force = false) {
  SweepOptions o;
  o.param = param;
  o.values = std::move(values);
  o.force = force;
  return o;
}

bool has_path(const std::vector<ConfigIssue>& v, const std::string& path) {
  return std::any_of(v.begin(), v.end(), [&](const auto& i) { return i.path == path; });
}

}  // namespace

TEST(Canned, AllParseDeskAndFull) {
  for (const auto& n : canned_names()) {
    EXPECT_NO_THROW(canned_config(n, false)) << n;
    EXPECT_NO_THROW(canned_config(n, true)) << n;
  }
}

TEST(Canned, BurgersRow) {
  const auto c = canned_config("burgers_fig1");
  EXPECT_EQ(std::get<Grid1D>(c.grid).n, 1000u);
  EXPECT_DOUBLE_EQ(model_mu(c.model), 0.001);
  EXPECT_EQ(c.network.method, InterpMethod::Linear);
  ASSERT_EQ(c.network.points.size(), 3u);
  EXPECT_DOUBLE_EQ(c.network.points[0][0], 0.16);
  EXPECT_DOUBLE_EQ(c.network.points[1][0], 0.49);
  EXPECT_DOUBLE_EQ(c.network.points[2][0], 0.82);
  for (const auto& s : c.schemes) EXPECT_DOUBLE_EQ(s.lambda, 2.0);
  EXPECT_DOUBLE_EQ(c.t_end, 4.0);
}

TEST(Canned, KppVariants) {
  const auto spline = canned_config("kpp_fig2");
  const auto linear = canned_config("kpp_fig2_linear");
  EXPECT_EQ(spline.network.method, InterpMethod::CubicSpline);
  EXPECT_EQ(linear.network.method, InterpMethod::Linear);
  for (const auto* c : {&spline, &linear}) {
    EXPECT_EQ(model_name(c->model), "kpp");
    EXPECT_DOUBLE_EQ(model_mu(c->model), 0.01);
    EXPECT_EQ(std::get<Grid1D>(c->grid).n, 1000u);
    EXPECT_EQ(c->network.points.size(), 3u);
  }
  EXPECT_EQ(resolve_scheme(linear, 1, 0.33).nonlinear_mode, NonlinearMode::GradientOfModelOnly);
  EXPECT_EQ(resolve_scheme(spline, 1, 0.33).nonlinear_mode, NonlinearMode::FullSubstitution);
}

TEST(Canned, KsRow) {
  const auto c = canned_config("ks_fig3");
  const auto& g = std::get<Grid1D>(c.grid);
  EXPECT_EQ(g.n, 1024u);
  EXPECT_DOUBLE_EQ(g.length, 32 * std::numbers::pi);
  EXPECT_EQ(c.network.ns, 64u);
  EXPECT_EQ(c.network.method, InterpMethod::CubicSpline);
  EXPECT_EQ(c.diff, DiffScheme::Spectral);
  EXPECT_GT(canned_config("ks_fig3", true).t_end, c.t_end);
}

TEST(Canned, NsRowDeskAndFull) {
  const auto desk = canned_config("ns_fig4");
  const auto full = canned_config("ns_fig4", true);
  EXPECT_EQ(std::get<Grid2D>(desk.grid).nx, 128u);
  EXPECT_EQ(std::get<Grid2D>(full.grid).nx, 256u);
  EXPECT_EQ(std::get<Grid2D>(full.grid).ny, 256u);
  EXPECT_DOUBLE_EQ(model_mu(full.model), 1e-4);
  EXPECT_EQ(full.network.kind, NetworkKind::Halton);
  EXPECT_EQ(full.network.ns, 400u);
  EXPECT_DOUBLE_EQ(full.network.rho, 5.0);
  const double h = network_h(build_network(full));
  EXPECT_NEAR(h, 2 * std::numbers::pi / 20, 1e-12);
  for (std::size_t i = 0; i < full.schemes.size(); ++i) {
    const auto s = resolve_scheme(full, i, h);
    EXPECT_DOUBLE_EQ(s.lambda, 2.0);
    EXPECT_DOUBLE_EQ(s.eta, s.kind == SchemeKind::Idda ? h : 0.0);
  }
}

TEST(ConfigValidation, NonPositiveLambdaNamesField) {
  auto doc = small_burgers();
  doc["schemes"][1]["lambda"] = 0;
  const auto v = issues_of(doc);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].path, "schemes[1].lambda");
}

TEST(ConfigValidation, CollectsEveryIssue) {
  auto doc = small_burgers();
  doc["t_end"] = -1;
  doc["grid"]["n"] = 2;
  doc["network"]["method"] = "cubic";
  doc["bogus"] = 1;
  doc["schemes"][0]["lamda"] = 3;
  const auto v = issues_of(doc);
  EXPECT_TRUE(has_path(v, "t_end"));
  EXPECT_TRUE(has_path(v, "grid.n"));
  EXPECT_TRUE(has_path(v, "network.method"));
  EXPECT_TRUE(has_path(v, "bogus"));
  EXPECT_TRUE(has_path(v, "schemes[0].lamda"));
  EXPECT_GE(v.size(), 5u);
}

TEST(ConfigValidation, CrossFieldChecks) {
  auto doc = small_burgers();
  doc["network"]["method"] = "rbf";
  EXPECT_TRUE(has_path(issues_of(doc), "network.method"));

  doc = small_burgers();
  doc["schemes"][0]["nonlinear_mode"] = "full";
  EXPECT_TRUE(has_path(issues_of(doc), "schemes[0].nonlinear_mode"));

  doc = small_burgers();
  doc["schemes"][0]["eta_k"] = 1;
  EXPECT_FALSE(issues_of(doc).empty());

  doc = small_burgers();
  doc["schemes"][1]["kind"] = "idda";
  EXPECT_TRUE(has_path(issues_of(doc), "schemes[1].kind"));

  doc = small_burgers();
  doc["network"] = {{"kind", "halton"}, {"ns", 10}};
  EXPECT_TRUE(has_path(issues_of(doc), "network.kind"));

  doc = small_burgers();
  doc["network"] = {{"kind", "explicit"}, {"points", {0.1, 1.5}}};
  EXPECT_TRUE(has_path(issues_of(doc), "network.points[1]"));

  doc = small_burgers();
  doc["output_dt"] = 1.0;
  EXPECT_TRUE(has_path(issues_of(doc), "output_dt"));
}

TEST(ConfigValidation, KsIddaRejectsGradientMode) {
  auto doc = canned_document("ks_fig3");
  doc["schemes"][1]["nonlinear_mode"] = "gradient-of-model";
  EXPECT_TRUE(has_path(issues_of(doc), "schemes[1].nonlinear_mode"));
}

TEST(ConfigValidation, SingleIntervalSeriesIsValid) {
  auto doc = small_burgers();
  doc["t_end"] = 0.1;
  doc["output_dt"] = 0.1;
  doc["snapshot_times"] = nlohmann::json::array();
  const auto c = parse_config(doc);
  EXPECT_EQ(output_grid(c.t_end, c.output_dt).size(), 2u);
  const auto runs = run_schemes(c);
  for (const auto& r : runs) EXPECT_EQ(r.result.error_series.size(), 2u);
}

TEST(ConfigValidation, FullBlockOverrides) {
  auto doc = small_burgers();
  doc["full"] = {{"grid", {{"n", 256}}}, {"t_end", 1.0}};
  EXPECT_EQ(std::get<Grid1D>(parse_config(doc).grid).n, 128u);
  const auto f = parse_config(doc, true);
  EXPECT_EQ(std::get<Grid1D>(f.grid).n, 256u);
  EXPECT_DOUBLE_EQ(f.t_end, 1.0);
}

TEST(Outputs, ErrorSeriesCsvFormat) {
  std::vector<SchemeRun> runs(2);
  runs[0].scheme = "aot";
  runs[1].scheme = "idda";
  runs[0].result.error_series.push_back(0.0, 1.0 / 3.0);
  runs[0].result.error_series.push_back(0.1, 0.25);
  runs[1].result.error_series.push_back(0.0, 1.0 / 3.0);
  EXPECT_EQ(error_series_csv(runs),
            "time,error_aot,error_idda\n0,0.33333333333333331,0.33333333333333331\n0.10000000000000001,0.25,\n");
  runs.pop_back();
  EXPECT_EQ(error_series_filename(runs), "error_series_aot.csv");
  EXPECT_EQ(error_series_csv(runs).substr(0, 11), "time,error\n");
}

TEST(Outputs, RunIsDeterministicAndComplete) {
  const auto dir = scratch_dir("run");
  const auto cfg = dir / "small.json";
  std::ofstream(cfg) << small_burgers().dump();
  std::ostringstream out, err;
  ASSERT_EQ(cmd_run(cfg.string(), (dir / "a").string(), false, out, err), 0) << err.str();
  ASSERT_EQ(cmd_run(cfg.string(), (dir / "b").string(), false, out, err), 0) << err.str();
  EXPECT_EQ(slurp(dir / "a" / "error_series.csv"), slurp(dir / "b" / "error_series.csv"));
  EXPECT_EQ(slurp(dir / "a" / "ratefit.json"), slurp(dir / "b" / "ratefit.json"));

  const auto csv = slurp(dir / "a" / "error_series.csv");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "time,error_aot,error_idda");

  const auto m = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  const std::regex iso(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)");
  EXPECT_TRUE(std::regex_match(m["started"].get<std::string>(), iso));
  EXPECT_TRUE(std::regex_match(m["finished"].get<std::string>(), iso));
  EXPECT_EQ(m["config"]["name"], "small");
  EXPECT_EQ(m["runs"].size(), 2u);
  for (const auto& f : m["files"]) EXPECT_TRUE(fs::exists(dir / "a" / f.get<std::string>())) << f;
  std::size_t listed = m["files"].size(), present = 0;
  for (const auto& e : fs::directory_iterator(dir / "a")) {
    (void)e;
    ++present;
  }
  EXPECT_EQ(listed, present);
  fs::remove_all(dir);
}

TEST(Outputs, InvalidConfigExitsTwoWithoutOutputs) {
  const auto dir = scratch_dir("bad");
  auto doc = small_burgers();
  doc["schemes"][0]["lambda"] = -1;
  std::ofstream(dir / "bad.json") << doc.dump();
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run((dir / "bad.json").string(), (dir / "o").string(), false, out, err), 2);
  EXPECT_NE(err.str().find("schemes[0].lambda"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir / "o"));
  EXPECT_EQ(cmd_run((dir / "missing.json").string(), std::nullopt, false, out, err), 2);
  fs::remove_all(dir);
}

TEST(Outputs, TwoDimensionalSnapshotSidecar) {
  const auto dir = scratch_dir("ns");
  auto doc = nlohmann::json::parse(R"({
    "model": {"type": "ns2d", "mu": 0.01},
    "grid": {"nx": 16, "ny": 16},
    "network": {"kind": "halton", "ns": 30, "rho": 3},
    "schemes": [{"kind": "idda", "lambda": 2, "eta_k": 1}],
    "t_end": 0.05, "output_dt": 0.05, "snapshot_times": [0.05]
  })");
  const auto c = parse_config(doc);
  const auto runs = run_schemes(c);
  const auto files = write_run_outputs(c, runs, dir, iso8601_now());
  EXPECT_TRUE(fs::exists(dir / "error_series_idda.csv"));
  const auto side = nlohmann::json::parse(slurp(dir / "snapshots_idda.json"));
  EXPECT_EQ(side["nx"], 16);
  const auto csv = slurp(dir / "snapshots_idda.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 257);
  EXPECT_EQ(files.back(), "manifest.json");
  fs::remove_all(dir);
}

TEST(Sweep, OrderAndWorkerIndependence) {
  const auto c = parse_config(small_burgers());
  auto o = sweep_of("Ns", {12, 4, 8});
  o.workers = 1;
  const auto one = to_csv(run_sweep(c, o));
  o.workers = 4;
  ::setenv("NUDGE_LAB_THREADS", "3", 1);
  const auto many = to_csv(run_sweep(c, o));
  ::unsetenv("NUDGE_LAB_THREADS");
  EXPECT_EQ(one, many);
  const auto t = sweep_from_csv(one, "Ns");
  ASSERT_EQ(t.rows.size(), 6u);
  EXPECT_EQ(t.rows[0].param_value, 4);
  EXPECT_EQ(t.rows[0].scheme, "aot");
  EXPECT_EQ(t.rows[1].scheme, "idda");
  EXPECT_EQ(t.rows[5].param_value, 12);
}

TEST(Sweep, ValueChecks) {
  const auto c = parse_config(small_burgers());
  EXPECT_THROW(run_sweep(c, sweep_of("Ns", {})), ConfigErrors);
  EXPECT_THROW(run_sweep(c, sweep_of("Ns", {200})), ConfigErrors);
  EXPECT_THROW(run_sweep(c, sweep_of("lambda", {5})), ConfigErrors);
  EXPECT_THROW(run_sweep(c, sweep_of("rho", {2})), ConfigErrors);
  EXPECT_THROW(run_sweep(c, sweep_of("Ns", {2.5}, true)), ConfigErrors);
  std::ostringstream out, err;
  const auto dir = scratch_dir("sw");
  std::ofstream(dir / "c.json") << small_burgers().dump();
  EXPECT_EQ(cmd_sweep((dir / "c.json").string(), sweep_of("Ns", {}), out, err), 2);
  fs::remove_all(dir);
}

TEST(Sweep, ApplyParameter) {
  const auto ns = canned_config("ns_fig4");
  const auto a = apply_parameter(ns, "eta_k", 0.0);
  EXPECT_DOUBLE_EQ(resolve_scheme(a, 1, 0.3).eta, 0.0);
  const auto b = apply_parameter(ns, "rho", 2.0);
  EXPECT_DOUBLE_EQ(std::get<Network2D>(build_network(b)).rho(), 2.0);
  const auto d = apply_parameter(canned_config("burgers_fig1"), "Ns", 10);
  const auto net = std::get<Network1D>(build_network(d));
  EXPECT_EQ(net.size(), 10u);
  EXPECT_EQ(net.method(), InterpMethod::Linear);
}

TEST(Workers, EnvironmentOverrides) {
  ::setenv("NUDGE_LAB_THREADS", "5", 1);
  EXPECT_EQ(resolve_workers(2), 5u);
  ::setenv("NUDGE_LAB_THREADS", "zero", 1);
  EXPECT_EQ(resolve_workers(2), 2u);
  ::unsetenv("NUDGE_LAB_THREADS");
  EXPECT_EQ(resolve_workers(2), 2u);
  EXPECT_GE(resolve_workers(), 1u);
}

TEST(Workers, ParallelForVisitsEachIndexOnce) {
  std::vector<std::atomic<int>> hits(97);
  parallel_for(hits.size(), 7, [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(Rate, SyntheticAndMalformed) {
  std::string exp = "time,error\n", flat = "time,error\n";
  for (int i = 0; i <= 80; ++i) {
    const double t = 0.05 * i;
    exp += format_double(t) + "," + format_double(std::exp(-2 * t)) + "\n";
    flat += format_double(t) + ",3\n";
  }
  const auto f = fit_rate(read_error_csv(exp));
  EXPECT_NEAR(f.gamma, 2.0, 1e-9);
  EXPECT_EQ(fit_rate(read_error_csv(flat)).status, FitStatus::NonConvergent);
  EXPECT_THROW(read_error_csv("t,e\n0,1\n"), ConfigErrors);
  EXPECT_THROW(read_error_csv("time,error\n0,x\n"), ConfigErrors);
  EXPECT_THROW(read_error_csv("time,error\n0,1,2\n"), ConfigErrors);
  EXPECT_THROW(read_error_csv("time,error\n1,1\n0,1\n"), ConfigErrors);

  const auto two = read_error_csv("time,error_aot,error_idda\n0,1,4\n1,0.5,\n", "error_idda");
  EXPECT_EQ(two.size(), 1u);
  EXPECT_DOUBLE_EQ(two.errors[0], 4.0);
}

TEST(Rate, CommandExitCodes) {
  const auto dir = scratch_dir("rate");
  std::ofstream(dir / "bad.csv") << "time;error\n0;1\n";
  std::ostringstream out, err;
  EXPECT_EQ(cmd_rate((dir / "bad.csv").string(), {}, "", out, err), 2);
  EXPECT_EQ(cmd_rate((dir / "none.csv").string(), {}, "", out, err), 2);
  std::ofstream(dir / "ok.csv") << "time,error\n0,1\n1,0.5\n2,0.25\n3,0.125\n4,0.0625\n";
  out.str("");
  EXPECT_EQ(cmd_rate((dir / "ok.csv").string(), {}, "", out, err), 0);
  const auto j = nlohmann::json::parse(out.str());
  EXPECT_NEAR(j["gamma"].get<double>(), std::log(2.0), 1e-12);
  fs::remove_all(dir);
}

TEST(Check, BurgersReportIsOutsideWindow) {
  const auto c = canned_config("burgers_fig1");
  const auto reports = check_config(c);
  ASSERT_EQ(reports.size(), 2u);
  const auto& idda = reports[1].report;
  EXPECT_EQ(reports[1].scheme, "idda");
  EXPECT_FALSE(idda.feasible);
  EXPECT_LT(idda.lambda_upper, 2.0);
  // independent re-evaluation from the reported inputs
  const double c2h2 = idda.C * idda.C * idda.h * idda.h;
  EXPECT_EQ(idda.lambda_upper, (idda.mu + idda.eta * idda.kappa) / c2h2);
  EXPECT_EQ(idda.gamma_predicted, idda.lambda * idda.alpha - idda.L * idda.L * c2h2 / (2.0 * idda.mu));
  EXPECT_NEAR(idda.h, 0.34, 1e-12);
  EXPECT_GT(idda.L, 0.0);
  EXPECT_EQ(to_json(reports[1])["note"], "outside sufficient window; experiment proceeds");
}
