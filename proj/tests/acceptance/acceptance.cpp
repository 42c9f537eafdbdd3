// Acceptance criteria 1-10. Usage: acceptance [--full] [criterion ...]
// Prints one PASS/FAIL line per criterion; exits non-zero if any fails.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <algorithm>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "nudge/core/poisson.hpp"
#include "nudge/core/spectral.hpp"
#include "nudge/experiments/runner.hpp"
#include "nudge/models/model1d.hpp"
#include "nudge/models/navier_stokes.hpp"

using namespace nudge;
namespace fs = std::filesystem;

namespace {

constexpr double pi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
  }
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

std::string key_of(const TwinExperiment& e) {
  nlohmann::json j = {{"model", model_name(e.model)},
                      {"mu", model_mu(e.model)},
                      {"network", to_json(e.network)},
                      {"scheme", {to_string(e.scheme.kind), e.scheme.lambda, e.scheme.eta, to_string(e.scheme.nonlinear_mode)}},
                      {"t", {e.t_end, e.output_dt, e.blowup_factor}},
                      {"tol", {e.tolerances.rel_tol, e.tolerances.abs_tol}},
                      {"diff", e.diff_scheme ? to_string(*e.diff_scheme) : "default"}};
  if (const auto* g = std::get_if<Grid1D>(&e.grid)) j["grid"] = {g->n, g->length};
  else {
    const auto& g2 = std::get<Grid2D>(e.grid);
    j["grid"] = {g2.nx, g2.ny, g2.lx, g2.ly};
  }
  return j.dump();
}

struct Fitted {
  TwinResult result;
  RateFit fit;
};

/// Twin runs shared between criteria of one invocation.
class RunCache {
 public:
  struct Job {
    ExperimentConfig config;
    std::size_t scheme;
  };

  std::vector<const Fitted*> run(const std::vector<Job>& jobs) {
    std::vector<std::string> keys;
    std::vector<std::size_t> todo;
    for (std::size_t i = 0; i < jobs.size(); ++i) {
      keys.push_back(key_of(make_experiment(jobs[i].config, jobs[i].scheme)));
      if (!cache_.count(keys.back()) &&
          std::find(keys.begin(), keys.end() - 1, keys.back()) == keys.end() - 1)
        todo.push_back(i);
    }
    std::vector<Fitted> fresh(todo.size());
    parallel_for(todo.size(), resolve_workers(), [&](std::size_t k) {
      const auto& job = jobs[todo[k]];
      fresh[k].result = run_twin(make_experiment(job.config, job.scheme));
      fresh[k].fit = fit_rate(fresh[k].result.error_series, job.config.rate_fit);
    });
    for (std::size_t k = 0; k < todo.size(); ++k) cache_[keys[todo[k]]] = std::move(fresh[k]);
    std::vector<const Fitted*> out;
    for (const auto& k : keys) out.push_back(&cache_.at(k));
    return out;
  }

  const Fitted& run(const ExperimentConfig& c, std::size_t scheme) { return *run({{c, scheme}})[0]; }

 private:
  std::map<std::string, Fitted> cache_;
};

std::size_t scheme_index(const ExperimentConfig& c, SchemeKind k) {
  for (std::size_t i = 0; i < c.schemes.size(); ++i)
    if (c.schemes[i].kind == k) return i;
  throw Error("config has no " + to_string(k) + " scheme");
}

std::string describe(const char* label, const Fitted& f) {
  std::string s = std::string(label) + " gamma " + num(f.fit.gamma);
  if (f.fit.status != FitStatus::Ok) s += " (" + to_string(f.fit.status) + ")";
  if (f.result.status != RunStatus::Ok) s += " [" + to_string(f.result.status) + "]";
  return s;
}

bool converged(const Fitted& f) { return f.result.status == RunStatus::Ok && f.fit.status == FitStatus::Ok; }

// ------------------------------------------------------------ criteria

void burgers_headline(RunCache& cache, Outcome& o) {
  const auto c = canned_config("burgers_fig1");
  const auto& idda = cache.run(c, scheme_index(c, SchemeKind::Idda));
  const auto& aot = cache.run(c, scheme_index(c, SchemeKind::Aot));
  o.require(converged(idda) && within(idda.fit.gamma, 1.8, 2.2), describe("IDDA", idda) + " in [1.8, 2.2]");
  o.require(converged(aot) && within(aot.fit.gamma, 0.6, 1.2), describe("AOT", aot) + " in [0.6, 1.2]");
  o.require(idda.fit.gamma > aot.fit.gamma, "IDDA > AOT");
}

void burgers_ns_sweep(RunCache& cache, Outcome& o) {
  const auto base = canned_config("burgers_fig1");
  const std::vector<double> values = {3, 10, 100};
  std::vector<RunCache::Job> jobs;
  for (double v : values) {
    const auto c = apply_parameter(base, "Ns", v);
    jobs.push_back({c, scheme_index(c, SchemeKind::Idda)});
    jobs.push_back({c, scheme_index(c, SchemeKind::Aot)});
  }
  const auto r = cache.run(jobs);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto ns = std::to_string(static_cast<int>(values[i]));
    o.require(converged(*r[2 * i]) && within(r[2 * i]->fit.gamma, 1.8, 2.2),
              "Ns=" + ns + ": " + describe("IDDA", *r[2 * i]) + " in [1.8, 2.2]");
    o.require(r[2 * i + 1]->fit.gamma < 1.8, describe("AOT", *r[2 * i + 1]) + " < 1.8");
  }
}

void kpp_headline(RunCache& cache, Outcome& o) {
  const auto c = canned_config("kpp_fig2");
  const auto& idda = cache.run(c, scheme_index(c, SchemeKind::Idda));
  const auto& aot = cache.run(c, scheme_index(c, SchemeKind::Aot));
  o.require(converged(idda) && within(idda.fit.gamma, 3.5, 4.5), describe("IDDA", idda) + " in [3.5, 4.5]");
  const double late = aot.fit.secondary ? aot.fit.secondary->gamma : std::numeric_limits<double>::quiet_NaN();
  o.require(aot.fit.secondary && late < 2.5, "AOT late-window gamma " + num(late) + " < 2.5");
}

void kpp_lambda_sweep(RunCache& cache, Outcome& o) {
  const auto base = canned_config("kpp_fig2");
  const std::vector<double> lambdas = {1, 2, 4, 8, 18, 36};
  std::vector<RunCache::Job> jobs;
  for (double l : lambdas) {
    const auto c = apply_parameter(base, "lambda", l);
    jobs.push_back({c, scheme_index(c, SchemeKind::Idda)});
    jobs.push_back({c, scheme_index(c, SchemeKind::Aot)});
  }
  const auto r = cache.run(jobs);
  std::string gammas;
  for (std::size_t i = 0; i < lambdas.size(); ++i)
    gammas += (i ? ", " : "") + num(lambdas[i]).substr(0, num(lambdas[i]).find('.')) + ":" + num(r[2 * i]->fit.gamma);
  o.require(true, "IDDA gamma by lambda {" + gammas + "}");
  bool monotone = true, capped = true;
  for (std::size_t i = 0; i < lambdas.size(); ++i) capped = capped && converged(*r[2 * i]) && r[2 * i]->fit.gamma <= 12;
  for (std::size_t i = 1; i <= 3; ++i) monotone = monotone && r[2 * i]->fit.gamma >= r[2 * (i - 1)]->fit.gamma;
  const double g8 = r[6]->fit.gamma;
  const bool flat = within(r[8]->fit.gamma, 0.7 * g8, 1.3 * g8) && within(r[10]->fit.gamma, 0.7 * g8, 1.3 * g8);
  o.require(capped, "all IDDA gamma <= 12");
  o.require(monotone, "non-decreasing up to lambda=8");
  o.require(flat, "lambda=18,36 within 30% of lambda=8");
  const auto& aot1 = *r[1];
  o.require(aot1.fit.status == FitStatus::NonConvergent || aot1.result.status != RunStatus::Ok || aot1.fit.gamma < 0.5,
            "lambda=1 " + describe("AOT", aot1) + " non-convergent or < 0.5");
}

void ks_headline(RunCache& cache, Outcome& o) {
  const auto c = canned_config("ks_fig3");
  const auto& idda = cache.run(c, scheme_index(c, SchemeKind::Idda));
  const auto& aot = cache.run(c, scheme_index(c, SchemeKind::Aot));
  o.require(converged(idda) && within(idda.fit.gamma, 1.7, 2.3), describe("IDDA", idda) + " in [1.7, 2.3]");
  o.require(converged(aot) && within(aot.fit.gamma, 0.9, 1.6), describe("AOT", aot) + " in [0.9, 1.6]");
}

void ks_threshold(RunCache& cache, Outcome& o) {
  const auto base = canned_config("ks_fig3");
  const auto c24 = apply_parameter(base, "Ns", 24), c48 = apply_parameter(base, "Ns", 48);
  const auto r = cache.run({{c24, scheme_index(c24, SchemeKind::Idda)},
                            {c24, scheme_index(c24, SchemeKind::Aot)},
                            {c48, scheme_index(c48, SchemeKind::Idda)},
                            {c48, scheme_index(c48, SchemeKind::Aot)}});
  auto nonconv = [](const Fitted& f) {
    return f.result.status != RunStatus::Ok || f.fit.status != FitStatus::Ok;
  };
  o.require(nonconv(*r[0]), "Ns=24 " + describe("IDDA", *r[0]) + " non-convergent");
  o.require(nonconv(*r[1]), "Ns=24 " + describe("AOT", *r[1]) + " non-convergent");
  o.require(converged(*r[2]) && within(r[2]->fit.gamma, 1.7, 2.3), "Ns=48 " + describe("IDDA", *r[2]) + " in [1.7, 2.3]");
  o.require(converged(*r[3]) && r[3]->fit.gamma > 0, "Ns=48 " + describe("AOT", *r[3]) + " converges");
}

bool g_full = false;

void ns_desk(RunCache& cache, Outcome& o) {
  const auto c = canned_config("ns_fig4");
  const auto r = cache.run({{c, scheme_index(c, SchemeKind::Idda)}, {c, scheme_index(c, SchemeKind::Aot)}});
  const auto& idda = *r[0];
  const auto& aot = *r[1];
  o.require(converged(idda) && idda.fit.gamma >= 1.5, "128^2 " + describe("IDDA", idda) + " >= 1.5");
  o.require(aot.fit.gamma <= 1.2, describe("AOT", aot) + " <= 1.2");
  o.require(idda.fit.gamma > aot.fit.gamma, "IDDA > AOT");
  if (g_full) {
    const auto f = canned_config("ns_fig4", true);
    const auto& full = cache.run(f, scheme_index(f, SchemeKind::Idda));
    o.require(converged(full) && within(full.fit.gamma, 1.8, 2.4), "256^2 " + describe("IDDA", full) + " in [1.8, 2.4]");
  } else {
    o.detail << "; 256^2 run skipped (pass --full)";
  }
}

void ns_robustness(RunCache& cache, Outcome& o) {
  auto base = canned_config("ns_fig4");
  const std::size_t ii = scheme_index(base, SchemeKind::Idda), ia = scheme_index(base, SchemeKind::Aot);
  base.schemes[ia].matched_eta = true;
  std::vector<RunCache::Job> jobs;
  for (double rho : {2.0, 5.0, 10.0}) jobs.push_back({apply_parameter(base, "rho", rho), ii});
  const auto eta0 = apply_parameter(base, "eta_k", 0.0);
  jobs.push_back({eta0, ii});
  jobs.push_back({eta0, ia});
  const auto r = cache.run(jobs);
  const double lambda = base.schemes[ii].lambda;
  const char* rhos[] = {"2", "5", "10"};
  for (std::size_t i = 0; i < 3; ++i)
    o.require(converged(*r[i]) && std::abs(r[i]->fit.gamma - lambda) <= 0.25 * lambda,
              std::string("rho=") + rhos[i] + " " + describe("IDDA", *r[i]) + " within 25% of lambda");
  o.require(converged(*r[3]) && r[3]->fit.gamma > 0.5, "eta=0 " + describe("IDDA", *r[3]) + " > 0.5");
  o.require(r[4]->fit.gamma < r[3]->fit.gamma, "eta=0 matched " + describe("AOT", *r[4]) + " < IDDA");
}

// ------------------------------------------------------------ property suite

Field1D band_limited(const Grid1D& g, std::mt19937& rng, int kmax) {
  std::normal_distribution<double> nd;
  std::vector<double> a(kmax + 1), b(kmax + 1);
  for (int k = 0; k <= kmax; ++k) a[k] = nd(rng), b[k] = nd(rng);
  return sample_function(g, [&](double x) {
    double s = 0;
    for (int k = 0; k <= kmax; ++k) s += a[k] * std::cos(2 * pi * k * x / g.length) + b[k] * std::sin(2 * pi * k * x / g.length);
    return s;
  });
}

Field2D smooth_2d(const Grid2D& g, std::mt19937& rng, int kmax) {
  std::normal_distribution<double> nd;
  std::vector<double> c;
  for (int i = 0; i < 4 * (kmax + 1) * (kmax + 1); ++i) c.push_back(nd(rng));
  return sample_function(g, [&](double x, double y) {
    double s = 0;
    std::size_t n = 0;
    for (int p = 0; p <= kmax; ++p)
      for (int q = 0; q <= kmax; ++q) {
        const double cx = std::cos(p * x), sx = std::sin(p * x), cy = std::cos(q * y), sy = std::sin(q * y);
        s += c[n] * cx * cy + c[n + 1] * cx * sy + c[n + 2] * sx * cy + c[n + 3] * sx * sy;
        n += 4;
      }
    return s;
  });
}

double max_abs(std::span<const double> a, std::span<const double> b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

void property_suite(RunCache&, Outcome& o) {
  std::mt19937 rng(7);

  // coercivity lemma on 200 random band-limited fields
  {
    const Grid1D g{512, 1.0};
    int checked = 0, held = 0;
    for (auto m : {InterpMethod::Linear, InterpMethod::CubicSpline})
      for (std::size_t ns : {16, 32}) {
        const auto net = equispaced_network(ns, 1.0, m);
        const double hs[] = {net.h(), net.h() / 2};
        const double c = estimate_interp_constant(m, 1.0, hs);
        for (int t = 0; t < 50; ++t) {
          const auto f = band_limited(g, rng, static_cast<int>(ns / 4));
          const auto d = coercivity_diagnostic(f, net);
          ++checked;
          if (d.margin(0.5, c, net.h()) >= -1e-12 * d.norm2) ++held;
        }
      }
    o.require(held == checked && checked == 200, "coercivity " + std::to_string(held) + "/" + std::to_string(checked));
  }

  // interpolation reproduces sensor data and is linear
  {
    double worst = 0;
    std::uniform_real_distribution<double> ud(-1, 1);
    for (auto m : {InterpMethod::Linear, InterpMethod::CubicSpline}) {
      const Network1D net({0.05, 0.2, 0.33, 0.61, 0.7, 0.93}, 1.0, m);
      std::vector<double> a(net.size()), b(net.size()), ab(net.size());
      for (std::size_t k = 0; k < a.size(); ++k) a[k] = ud(rng), b[k] = ud(rng), ab[k] = 2 * a[k] - 3 * b[k];
      const auto ia = build_interpolant(net, a), ib = build_interpolant(net, b), iab = build_interpolant(net, ab);
      for (std::size_t k = 0; k < a.size(); ++k) worst = std::max(worst, std::abs(ia(net.points()[k]) - a[k]));
      for (int s = 0; s < 50; ++s) {
        const double x = 0.02 * s;
        worst = std::max(worst, std::abs(iab(x) - (2 * ia(x) - 3 * ib(x))));
      }
    }
    const auto net2 = halton_network(60, 2 * pi, 2 * pi, 4.0);
    std::vector<double> a(net2.size()), b(net2.size()), ab(net2.size());
    for (std::size_t k = 0; k < a.size(); ++k) a[k] = ud(rng), b[k] = ud(rng), ab[k] = 0.5 * a[k] + b[k];
    const auto ia = build_interpolant(net2, a), ib = build_interpolant(net2, b), iab = build_interpolant(net2, ab);
    for (std::size_t k = 0; k < a.size(); ++k)
      worst = std::max(worst, std::abs(ia(net2.points()[k].x, net2.points()[k].y) - a[k]));
    for (int s = 0; s < 50; ++s) {
      const double x = 0.12 * s, y = 0.07 * s;
      worst = std::max(worst, std::abs(iab(x, y) - (0.5 * ia(x, y) + ib(x, y))));
    }
    o.require(worst <= 1e-10, "interpolation reproduction/linearity max err " + sci(worst));
  }

  // Poisson inversion and divergence-free velocity
  {
    double resid = 0, div = 0;
    const Grid2D g(48, 48, 2 * pi, 2 * pi);
    Spectral2D sp(g);
    for (int t = 0; t < 5; ++t) {
      auto w = smooth_2d(g, rng, 6);
      const auto psi = poisson_solve_2d(w);
      std::vector<double> lap(g.size()), r(g.size());
      sp.laplacian(psi.values(), lap);
      const double m = mean(w);
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = -lap[i] - (w[i] - m);
      resid = std::max(resid, l2_norm(r, cell_measure(g)));
      const auto [u, v] = velocity_from_streamfunction(psi);
      div = std::max(div, l2_norm(divergence(u, v)));
    }
    o.require(resid <= 1e-10 && div <= 1e-10, "Poisson residual " + sci(resid) + ", divergence " + sci(div));
  }

  // rate-fit recovery
  {
    double worst = 0;
    for (double gamma : {0.5, 1.0, 2.0, 4.0}) {
      ErrorSeries s;
      for (int i = 0; i <= 200; ++i) s.push_back(0.02 * i, 3.0 * std::exp(-gamma * 0.02 * i));
      worst = std::max(worst, std::abs(fit_rate(s).gamma - gamma) / gamma);
    }
    o.require(worst <= 1e-3, "rate-fit relative error " + sci(worst));
  }

  // d~ = 0 leaves every scheme equal to the reference model
  {
    double worst = 0;
    for (const ModelSpec m : {ModelSpec{Burgers{}}, ModelSpec{KppBurgers{}}, ModelSpec{KuramotoSivashinsky{}}}) {
      const Grid1D g{256, default_length(m)};
      Model1D op(m, g);
      const auto v = initial_condition(m, IcKind::Reference, g);
      const Field1D zero(g);
      Field1D ref(g), a(g), b(g);
      op.reference(v.values(), ref.values());
      op.aot(v.values(), zero.values(), 2.0, a.values());
      op.idda(v.values(), zero.values(), zero.values(), zero.values(),
              {SchemeKind::Idda, 2.0, 0.0, default_nonlinear_mode(m, InterpMethod::CubicSpline)}, b.values());
      worst = std::max({worst, max_abs(a.values(), ref.values()), max_abs(b.values(), ref.values())});
    }
    const Grid2D g2(64, 64, 2 * pi, 2 * pi);
    NavierStokesOperator ns(1e-4, g2);
    const auto w = initial_condition(NavierStokes2D{}, IcKind::Reference, g2);
    const Field2D zero(g2);
    Field2D ref(g2), a(g2), b(g2);
    ns.reference(w.values(), ref.values());
    ns.aot(w.values(), zero.values(), 2.0, 0.3, a.values());
    ns.idda(w.values(), zero.values(), 2.0, 0.3, b.values());
    worst = std::max({worst, max_abs(a.values(), ref.values()), max_abs(b.values(), ref.values())});
    o.require(worst <= 1e-12, "null discrepancy max deviation " + sci(worst));
  }

  // condition report arithmetic against an independent evaluation
  {
    std::uniform_real_distribution<double> ud(0.01, 3);
    bool exact = true;
    for (int t = 0; t < 100; ++t) {
      const double L = ud(rng), C = ud(rng), h = ud(rng) / 10, mu = ud(rng) / 100, eta = ud(rng) / 10,
                   kappa = ud(rng) / 3, alpha = 0.5, lambda = 2 * ud(rng);
      const auto i = check_condition(SchemeKind::Idda, L, C, h, mu, eta, kappa, alpha, lambda);
      const double me = mu + eta * kappa, q = L * L * (C * C * h * h);
      exact = exact && i.lambda_lower == q / (2 * alpha * me) && i.lambda_upper == me / (C * C * h * h) &&
              i.gamma_predicted == lambda * alpha - q / (2 * me) &&
              i.feasible == (i.lambda_lower < lambda && lambda < i.lambda_upper);
      const auto a = check_condition(SchemeKind::Aot, L, C, h, mu, eta, kappa, alpha, lambda);
      exact = exact && a.lambda_lower == L / alpha && a.lambda_upper == 2 * mu / (C * C * h * h) &&
              a.gamma_predicted == lambda * alpha - L;
    }
    o.require(exact, "condition report arithmetic exact");
  }
}

// ------------------------------------------------------------ determinism

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism(RunCache&, Outcome& o) {
  const auto root = fs::temp_directory_path() / ("nudge_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::ostringstream sink;
  const int a = cmd_run("burgers_fig1", (root / "a").string(), false, sink, sink);
  const int b = cmd_run("burgers_fig1", (root / "b").string(), false, sink, sink);
  const auto fa = slurp(root / "a" / "error_series.csv"), fb = slurp(root / "b" / "error_series.csv");
  o.require(a == 0 && b == 0, "exit codes " + std::to_string(a) + ", " + std::to_string(b));
  o.require(!fa.empty() && fa == fb, "error_series.csv byte-identical (" + std::to_string(fa.size()) + " bytes)");
  fs::remove_all(root);
}

struct Criterion {
  int id;
  const char* title;
  double budget_s;
  void (*run)(RunCache&, Outcome&);
};

const Criterion kCriteria[] = {
    {1, "Burgers headline", 120, burgers_headline},
    {2, "Burgers Ns-sweep", 600, burgers_ns_sweep},
    {3, "KPP headline", 180, kpp_headline},
    {4, "KPP lambda-sweep saturation", 1e9, kpp_lambda_sweep},
    {5, "KS headline", 600, ks_headline},
    {6, "KS observability threshold", 900, ks_threshold},
    {7, "NS desk-scale", 1800, ns_desk},
    {8, "NS parameter robustness", 1e9, ns_robustness},
    {9, "Property suite", 60, property_suite},
    {10, "Determinism", 1e9, determinism},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--full") g_full = true;
    else wanted.push_back(std::stoi(a));
  }
  if (wanted.empty())
    for (const auto& c : kCriteria) wanted.push_back(c.id);

  RunCache cache;
  bool all = true;
  for (int id : wanted) {
    const auto* c = std::find_if(std::begin(kCriteria), std::end(kCriteria), [&](const auto& k) { return k.id == id; });
    if (c == std::end(kCriteria)) {
      std::cerr << "unknown criterion " << id << "\n";
      return 2;
    }
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c->run(cache, o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c->budget_s < 1e9) o.require(secs < c->budget_s, "runtime " + num(secs) + " s < " + num(c->budget_s).substr(0, num(c->budget_s).find('.')) + " s");
    else o.detail << "; runtime " << num(secs) << " s";
    std::cout << "criterion " << c->id << " " << (o.pass ? "PASS" : "FAIL") << "  " << c->title << ": "
              << o.detail.str() << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
