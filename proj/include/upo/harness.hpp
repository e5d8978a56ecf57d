#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "upo/config.hpp"

namespace upo {

/// One closed-loop step. `index_star`/`value_star` come from the oracle scan,
/// never from the selector; on ties index_star is the lowest maximizer.
struct TraceRecord {
  TimeIndex k = 0;
  GridIndex index = 0;
  double u = 0.0;
  double y = 0.0;
  double value = 0.0;  ///< noiseless f_k(u_k)
  GridIndex index_star = 0;
  double value_star = 0.0;
  DecisionCase decision = DecisionCase::init;
  std::array<double, 3> values{};
};

struct RunTrace {
  std::string selector;
  std::vector<TraceRecord> records;
};

struct RunSettings {
  TimeIndex horizon = 300;
  GridIndex u0 = 0;
  int u1_direction = 1;
  std::uint64_t seed = 1;
  IndexInterval oracle_interval;
};

/// Run one selector against an objective for settings.horizon steps.
RunTrace run_selector(const Objective& objective, const SelectorConfig& config, const RunSettings& settings);

/// Run every configured selector on the same objective and noise realization.
std::vector<RunTrace> run_experiment(const ExperimentConfig& config);

/// CSV with a `# upo-trace v1` first line, a header and one row per step.
void write_trace_csv(std::ostream& out, const RunTrace& trace);
RunTrace read_trace_csv(std::istream& in, const std::string& source = "<trace>");

struct References {
  TimeIndex horizon = 0;
  double oracle_total = 0.0;         ///< sum_k max_u f_k(u)
  double best_constant_total = 0.0;  ///< max_u sum_k f_k(u)
  GridIndex best_constant_index = 0;
};

References compute_references(const Objective& objective, IndexInterval interval, TimeIndex horizon);

struct Metrics {
  std::string selector;
  TimeIndex horizon = 0;
  TimeIndex steps_off_optimum = 0;
  double total_value = 0.0;
  TimeIndex perturbation_count = 0;
  std::optional<double> gain_vs_po_pct;  ///< relative to a standard_po trace, when present
  double gain_vs_constant_pct = 0.0;
  double oracle_gap_pct = 0.0;  ///< how much better the per-step oracle is
};

/// Metrics for every trace. Throws Error if a trace length differs from refs.horizon.
std::vector<Metrics> compute_metrics(std::span<const RunTrace> traces, const References& refs);

void write_metrics_csv(std::ostream& out, std::span<const Metrics> metrics);

/// (k, u, value) rows of the noiseless objective over `interval` for each k.
void export_curves(const Objective& objective, std::span<const TimeIndex> ks, IndexInterval interval,
                   std::ostream& out);

}  // namespace upo
