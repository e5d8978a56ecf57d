// upo: run experiments, export curves, recompute metrics, report constants.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "upo/config.hpp"
#include "upo/errors.hpp"
#include "upo/harness.hpp"
#include "upo/oracles.hpp"

namespace fs = std::filesystem;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string selectors;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "Experiment config file (defaults when omitted)");
  cmd->add_option("--seed", flags.seed, "Noise and sampling seed (overrides run.seed)");
  cmd->add_option("--out", flags.out, "Output directory (overrides run.output)");
  cmd->add_option("--selector", flags.selectors, "Comma-separated selectors: upo, standard_po, hei, thompson");
}

upo::ExperimentConfig resolve(const CommonFlags& flags) {
  upo::ExperimentConfig config = flags.config.empty() ? upo::ExperimentConfig::defaults() : upo::load_config(flags.config);
  if (flags.seed) config.seed = *flags.seed;
  if (!flags.out.empty()) config.output = flags.out;
  if (!flags.selectors.empty()) {
    std::vector<upo::SelectorConfig> chosen;
    std::stringstream ss(flags.selectors);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const upo::SelectorKind kind = upo::parse_selector_kind(name);
      auto it = std::find_if(config.selectors.begin(), config.selectors.end(),
                             [&](const upo::SelectorConfig& s) { return s.kind == kind; });
      if (it != config.selectors.end()) {
        chosen.push_back(*it);
      } else {
        upo::SelectorConfig s = upo::SelectorConfig::defaults(kind);
        if (config.rho > 0.0) s.rho = config.rho;
        chosen.push_back(s);
      }
    }
    config.selectors = chosen;
  }
  config.validate(flags.config.empty() ? "<defaults>" : flags.config);
  return config;
}

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw upo::Error("cannot write " + path.string());
  return out;
}

void print_metrics(const std::vector<upo::Metrics>& metrics) {
  std::printf("%-12s %10s %14s %10s %10s %10s %10s\n", "selector", "steps_off", "total_value", "perturbs", "vs_po%",
              "vs_const%", "oracle%");
  for (const auto& m : metrics) {
    char po[32] = "-";
    if (m.gain_vs_po_pct) std::snprintf(po, sizeof po, "%.3f", *m.gain_vs_po_pct);
    std::printf("%-12s %10lld %14.3f %10lld %10s %10.3f %10.3f\n", m.selector.c_str(),
                static_cast<long long>(m.steps_off_optimum), m.total_value,
                static_cast<long long>(m.perturbation_count), po, m.gain_vs_constant_pct, m.oracle_gap_pct);
  }
}

upo::References references_for(const upo::ExperimentConfig& config) {
  return upo::compute_references(upo::build_objective(config), config.scan_interval(), config.horizon);
}

int cmd_run(const CommonFlags& flags) {
  const upo::ExperimentConfig config = resolve(flags);
  const auto traces = upo::run_experiment(config);
  const fs::path dir(config.output);
  fs::create_directories(dir);
  for (const auto& t : traces) {
    auto out = open_out(dir / ("trace_" + t.selector + ".csv"));
    upo::write_trace_csv(out, t);
  }
  const auto metrics = upo::compute_metrics(traces, references_for(config));
  auto out = open_out(dir / "metrics.csv");
  upo::write_metrics_csv(out, metrics);
  print_metrics(metrics);
  return 0;
}

int cmd_curves(const CommonFlags& flags, const std::vector<upo::TimeIndex>& ks) {
  const upo::ExperimentConfig config = resolve(flags);
  const upo::Objective objective = upo::build_objective(config);
  if (flags.out.empty()) {
    upo::export_curves(objective, ks, config.scan_interval(), std::cout);
    return 0;
  }
  fs::create_directories(config.output);
  auto out = open_out(fs::path(config.output) / "curves.csv");
  upo::export_curves(objective, ks, config.scan_interval(), out);
  return 0;
}

int cmd_metrics(const CommonFlags& flags, std::vector<std::string> files) {
  const upo::ExperimentConfig config = resolve(flags);
  if (files.empty()) {
    const fs::path dir(config.output);
    if (!fs::is_directory(dir)) throw upo::Error("no trace files given and " + dir.string() + " is not a directory");
    for (const auto& entry : fs::directory_iterator(dir)) {
      const std::string name = entry.path().filename().string();
      if (name.rfind("trace_", 0) == 0 && entry.path().extension() == ".csv") files.push_back(entry.path().string());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw upo::Error("no trace_*.csv files in " + dir.string());
  }
  std::vector<upo::RunTrace> traces;
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw upo::Error("cannot read " + f);
    traces.push_back(upo::read_trace_csv(in, f));
  }
  const auto metrics = upo::compute_metrics(traces, references_for(config));
  upo::write_metrics_csv(std::cout, metrics);
  return 0;
}

int cmd_constants(const CommonFlags& flags) {
  const upo::ExperimentConfig config = resolve(flags);
  const upo::Objective objective = upo::build_objective(config);
  // Dawn on the PV day has zero power everywhere, so no unique maximizer at k = 0.
  const upo::TimeIndex first = config.objective.kind == "pv-day" ? 1 : 0;
  const auto interval = config.scan_interval();
  const auto ac = upo::estimate_assumption_constants(objective, interval, config.horizon, first);

  upo::SelectorConfig tuning = upo::SelectorConfig::defaults(upo::SelectorKind::upo);
  for (const auto& s : config.selectors) {
    if (s.kind == upo::SelectorKind::upo) tuning = s;
  }
  upo::ConvergenceInputs in;
  in.curvature = ac.curvature;
  in.drift = ac.drift;
  in.delta_u = config.grid_spacing;
  in.rho = config.rho;
  in.tau = tuning.tau;
  in.nu_star = tuning.nu;
  const auto c = upo::convergence_constants(in);

  std::printf("objective = %s\n", config.objective.kind.c_str());
  std::printf("interval = [%lld, %lld]\n", static_cast<long long>(interval.lo), static_cast<long long>(interval.hi));
  std::printf("times = [%lld, %lld)\n", static_cast<long long>(first), static_cast<long long>(config.horizon));
  std::printf("L_b = %.10g\nL_k = %.10g\ndelta_u = %.10g\nrho = %.10g\ntau = %.10g\nnu_star = %.10g\n", ac.curvature,
              ac.drift, in.delta_u, in.rho, in.tau, in.nu_star);
  std::printf("L_star = %.10g\nN = %lld\nd = %.10g\nb = %.10g\ngamma = %.10g\nc1 = %.10g\nc2 = %.10g\n", c.L_star,
              static_cast<long long>(c.N_window), c.d, c.b_dead, c.gamma, c.c1, c.c2);
  std::printf("lambda_star = %.10g\n", c.lambda_star);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Uncertainty-based perturb and observe: experiments and oracles"};
  app.require_subcommand(1);

  CommonFlags run_flags, curves_flags, metrics_flags, constants_flags;
  auto* run = app.add_subcommand("run", "Run the configured selectors and write traces and metrics");
  add_common(run, run_flags);

  auto* curves = app.add_subcommand("curves", "Export noiseless objective curves as k,u,value CSV");
  add_common(curves, curves_flags);
  std::vector<upo::TimeIndex> ks = {50, 150, 250};
  curves->add_option("--k", ks, "Time indices to export")->delimiter(',');

  auto* metrics = app.add_subcommand("metrics", "Recompute metrics from trace CSVs");
  add_common(metrics, metrics_flags);
  std::vector<std::string> files;
  metrics->add_option("traces", files, "Trace files (default: trace_*.csv in --out)");

  auto* constants = app.add_subcommand("constants", "Report assumption and convergence constants");
  add_common(constants, constants_flags);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(run_flags);
    if (*curves) return cmd_curves(curves_flags, ks);
    if (*metrics) return cmd_metrics(metrics_flags, files);
    if (*constants) return cmd_constants(constants_flags);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "upo: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
