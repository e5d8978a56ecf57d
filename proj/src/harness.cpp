#include "upo/harness.hpp"

#include <cinttypes>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include "upo/errors.hpp"

namespace upo {

namespace {

constexpr const char* kTraceMagic = "# upo-trace v1";
constexpr const char* kTraceHeader = "k,selector,iota,u,y,f,iota_star,f_star,case,h_left,h_center,h_right";

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

DecisionCase parse_case(const std::string& s) {
  for (auto c : {DecisionCase::init, DecisionCase::forced_left, DecisionCase::forced_right, DecisionCase::argmax_stay,
                 DecisionCase::argmax_left, DecisionCase::argmax_right, DecisionCase::keep_direction,
                 DecisionCase::reverse_direction}) {
    if (s == to_string(c)) return c;
  }
  throw Error("unknown decision case '" + s + "'");
}

}  // namespace

RunTrace run_selector(const Objective& objective, const SelectorConfig& config, const RunSettings& settings) {
  if (settings.horizon <= 0) throw ParameterError("horizon must be positive");
  ClosedLoop loop(objective, make_selector(config, objective.grid(), settings.u1_direction, settings.seed),
                  settings.u0);
  RunTrace trace;
  trace.selector = to_string(config.kind);
  trace.records.reserve(static_cast<std::size_t>(settings.horizon));
  for (TimeIndex k = 0; k < settings.horizon; ++k) {
    const MaximizerScan best = scan_maximizer(objective, k, settings.oracle_interval);
    const ClosedLoop::Step s = loop.step();
    TraceRecord r;
    r.k = s.k;
    r.index = s.index;
    r.u = objective.grid().value(s.index);
    r.y = s.y;
    r.value = objective.truth(s.k, s.index);
    r.index_star = best.index;
    r.value_star = best.value;
    r.decision = s.decision.kind;
    r.values = s.decision.values;
    trace.records.push_back(r);
  }
  return trace;
}

std::vector<RunTrace> run_experiment(const ExperimentConfig& config) {
  config.validate();
  const Objective objective = build_objective(config);
  const RunSettings settings{config.horizon, config.start_index(), config.u1_direction, config.seed,
                             config.scan_interval()};
  std::vector<RunTrace> traces;
  for (const auto& s : config.selectors) traces.push_back(run_selector(objective, s, settings));
  return traces;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
  out << kTraceMagic << '\n' << kTraceHeader << '\n';
  for (const auto& r : trace.records) {
    out << r.k << ',' << trace.selector << ',' << r.index << ',' << num(r.u) << ',' << num(r.y) << ','
        << num(r.value) << ',' << r.index_star << ',' << num(r.value_star) << ',' << to_string(r.decision) << ','
        << num(r.values[0]) << ',' << num(r.values[1]) << ',' << num(r.values[2]) << '\n';
  }
}

RunTrace read_trace_csv(std::istream& in, const std::string& source) {
  std::string line;
  if (!std::getline(in, line) || line != kTraceMagic) throw Error(source + ": not a upo trace (bad first line)");
  if (!std::getline(in, line) || line != kTraceHeader) throw Error(source + ": unexpected trace header");
  RunTrace trace;
  int number = 2;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 12) throw Error(source + ":" + std::to_string(number) + ": expected 12 columns");
    try {
      TraceRecord r;
      r.k = std::stoll(cells[0]);
      if (trace.records.empty()) {
        trace.selector = cells[1];
      } else if (cells[1] != trace.selector) {
        throw Error("mixed selectors in one trace");
      }
      r.index = std::stoll(cells[2]);
      r.u = std::stod(cells[3]);
      r.y = std::stod(cells[4]);
      r.value = std::stod(cells[5]);
      r.index_star = std::stoll(cells[6]);
      r.value_star = std::stod(cells[7]);
      r.decision = parse_case(cells[8]);
      r.values = {std::stod(cells[9]), std::stod(cells[10]), std::stod(cells[11])};
      trace.records.push_back(r);
    } catch (const std::logic_error& e) {
      throw Error(source + ":" + std::to_string(number) + ": bad value (" + e.what() + ")");
    } catch (const Error& e) {
      throw Error(source + ":" + std::to_string(number) + ": " + e.what());
    }
  }
  return trace;
}

References compute_references(const Objective& objective, IndexInterval interval, TimeIndex horizon) {
  if (horizon <= 0) throw ParameterError("horizon must be positive");
  References refs;
  refs.horizon = horizon;
  std::vector<double> totals(static_cast<std::size_t>(interval.size()), 0.0);
  for (TimeIndex k = 0; k < horizon; ++k) {
    double best = -std::numeric_limits<double>::infinity();
    for (GridIndex i = interval.lo; i <= interval.hi; ++i) {
      const double f = objective.truth(k, i);
      totals[static_cast<std::size_t>(i - interval.lo)] += f;
      best = std::max(best, f);
    }
    refs.oracle_total += best;
  }
  refs.best_constant_total = totals[0];
  refs.best_constant_index = interval.lo;
  for (std::size_t j = 1; j < totals.size(); ++j) {
    if (totals[j] > refs.best_constant_total) {
      refs.best_constant_total = totals[j];
      refs.best_constant_index = interval.lo + static_cast<GridIndex>(j);
    }
  }
  return refs;
}

std::vector<Metrics> compute_metrics(std::span<const RunTrace> traces, const References& refs) {
  std::vector<Metrics> out;
  const RunTrace* po = nullptr;
  for (const auto& t : traces) {
    if (t.selector == to_string(SelectorKind::standard_po)) po = &t;
  }
  auto total = [](const RunTrace& t) {
    double sum = 0.0;
    for (const auto& r : t.records) sum += r.value;
    return sum;
  };
  for (const auto& t : traces) {
    if (static_cast<TimeIndex>(t.records.size()) != refs.horizon) {
      throw Error("trace '" + t.selector + "' has " + std::to_string(t.records.size()) + " steps, expected " +
                  std::to_string(refs.horizon));
    }
    Metrics m;
    m.selector = t.selector;
    m.horizon = refs.horizon;
    m.total_value = total(t);
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const auto& r = t.records[k];
      // On ties at the optimum every maximizer counts as on-optimum.
      if (r.index != r.index_star && r.value < r.value_star) ++m.steps_off_optimum;
      if (k > 0 && r.index != t.records[k - 1].index) ++m.perturbation_count;
    }
    if (po) {
      const double po_total = total(*po);
      m.gain_vs_po_pct = 100.0 * (m.total_value - po_total) / std::abs(po_total);
    }
    m.gain_vs_constant_pct = 100.0 * (m.total_value - refs.best_constant_total) / std::abs(refs.best_constant_total);
    m.oracle_gap_pct = 100.0 * (refs.oracle_total - m.total_value) / std::abs(m.total_value);
    out.push_back(m);
  }
  return out;
}

void write_metrics_csv(std::ostream& out, std::span<const Metrics> metrics) {
  out << "selector,horizon,steps_off_optimum,total_value,perturbation_count,gain_vs_po_pct,gain_vs_constant_pct,"
         "oracle_gap_pct\n";
  for (const auto& m : metrics) {
    out << m.selector << ',' << m.horizon << ',' << m.steps_off_optimum << ',' << num(m.total_value) << ','
        << m.perturbation_count << ',' << (m.gain_vs_po_pct ? num(*m.gain_vs_po_pct) : std::string()) << ','
        << num(m.gain_vs_constant_pct) << ',' << num(m.oracle_gap_pct) << '\n';
  }
}

void export_curves(const Objective& objective, std::span<const TimeIndex> ks, IndexInterval interval,
                   std::ostream& out) {
  out << "k,u,value\n";
  for (const TimeIndex k : ks) {
    for (GridIndex i = interval.lo; i <= interval.hi; ++i) {
      out << k << ',' << num(objective.grid().value(i)) << ',' << num(objective.truth(k, i)) << '\n';
    }
  }
}

}  // namespace upo
