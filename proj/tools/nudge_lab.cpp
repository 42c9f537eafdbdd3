// nudge_lab: twin experiments comparing IDDA and AOT nudging.
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "nudge/experiments/runner.hpp"

namespace {

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  for (const auto& cell : nudge::split_csv_line(text))
    if (!cell.empty()) out.push_back(nudge::parse_double(cell));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Continuous data assimilation lab: IDDA versus interpolated AOT nudging"};
  app.set_version_flag("--version", nudge::kVersion);
  app.require_subcommand(1);

  std::string config;
  bool full = false;
  std::string out_dir;

  auto* run = app.add_subcommand("run", "Run a twin experiment for every scheme of a config");
  run->add_option("config", config, "Config file or canned name (" + [] {
    std::string s;
    for (const auto& n : nudge::canned_names()) s += (s.empty() ? "" : ", ") + n;
    return s;
  }() + ")")->required();
  run->add_option("--out", out_dir, "Output directory (default: the config's output_dir)");
  run->add_flag("--full", full, "Apply the config's full-size overrides");

  nudge::SweepOptions sweep_opts;
  std::string values_text;
  std::size_t workers = 0;
  auto* sweep = app.add_subcommand("sweep", "Run all (value, scheme) combinations of one parameter");
  sweep->add_option("config", config, "Config file or canned name")->required();
  sweep->add_option("--param", sweep_opts.param, "Ns, lambda, rho or eta_k")
      ->required()
      ->check(CLI::IsMember(nudge::sweep_parameters()));
  sweep->add_option("--values", values_text, "Comma-separated values")->required();
  sweep->add_option("--workers", workers, "Worker threads (NUDGE_LAB_THREADS takes precedence)")
      ->check(CLI::PositiveNumber);
  sweep->add_flag("--force", sweep_opts.force, "Allow values outside the model's parameter range");
  sweep->add_flag("--full", sweep_opts.full, "Apply the config's full-size overrides");
  sweep->add_option("--out", out_dir, "Output directory");

  auto* check = app.add_subcommand("check", "Print the sufficient-condition report for each scheme");
  check->add_option("config", config, "Config file or canned name")->required();
  check->add_flag("--full", full, "Apply the config's full-size overrides");

  std::string csv_path, column;
  nudge::FitPolicy policy;
  std::vector<double> window;
  auto* rate = app.add_subcommand("rate", "Fit the exponential decay rate of an error series CSV");
  rate->add_option("errors_csv", csv_path, "CSV with a time column and error columns")->required();
  rate->add_option("--column", column, "Error column (default: the first)");
  rate->add_option("--window", window, "Explicit fit window t_lo t_hi")->expected(2);
  rate->add_option("--transient-factor", policy.transient_factor, "Skip samples above this fraction of E(0)")
      ->check(CLI::Range(0.0, 1.0));
  rate->add_option("--plateau-abs", policy.plateau_abs, "Absolute plateau floor")->check(CLI::NonNegativeNumber);
  rate->add_option("--plateau-rel", policy.plateau_rel, "Plateau floor relative to E(0)")
      ->check(CLI::NonNegativeNumber);
  rate->add_option("--min-window", policy.min_window_fraction, "Shortest convergent window, as a fraction of the span")
      ->check(CLI::Range(0.0, 1.0));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nudge::kExitInvalid;
  }

  auto out_opt = out_dir.empty() ? std::nullopt : std::optional<std::string>(out_dir);
  if (*run) return nudge::cmd_run(config, out_opt, full, std::cout, std::cerr);
  if (*sweep) {
    try {
      sweep_opts.values = parse_values(values_text);
    } catch (const nudge::Error& e) {
      std::cerr << "config error: values: " << e.what() << "\n";
      return nudge::kExitInvalid;
    }
    if (workers > 0) sweep_opts.workers = workers;
    sweep_opts.out_dir = out_opt;
    return nudge::cmd_sweep(config, sweep_opts, std::cout, std::cerr);
  }
  if (*check) return nudge::cmd_check(config, full, std::cout, std::cerr);
  if (!window.empty()) {
    if (!(window[0] < window[1])) {
      std::cerr << "config error: window: t_lo must be below t_hi\n";
      return nudge::kExitInvalid;
    }
    policy.window = std::make_pair(window[0], window[1]);
  }
  return nudge::cmd_rate(csv_path, policy, column, std::cout, std::cerr);
}
