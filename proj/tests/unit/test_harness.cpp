#include <gtest/gtest.h>

#include <sstream>

#include "upo/config.hpp"
#include "upo/errors.hpp"
#include "upo/harness.hpp"

namespace upo {
namespace {

ExperimentConfig small_parabola_config() {
  ExperimentConfig c = ExperimentConfig::defaults();
  c.objective.kind = "drifting-parabola";
  c.objective.curvature = 0.5;
  c.objective.center = 3.0;
  c.objective.rate = 0.02;
  c.grid_spacing = 1.0;
  c.grid_bounds = IndexInterval{0, 12};
  c.rho = 1.0;
  c.horizon = 120;
  c.selectors = {SelectorConfig::defaults(SelectorKind::upo), SelectorConfig::defaults(SelectorKind::standard_po),
                 SelectorConfig::defaults(SelectorKind::hei), SelectorConfig::defaults(SelectorKind::thompson)};
  for (auto& s : c.selectors) s.rho = c.rho;
  return c;
}

TEST(Trace, CsvRoundTripIsExact) {
  const auto traces = run_experiment(small_parabola_config());
  for (const auto& t : traces) {
    std::stringstream buf;
    write_trace_csv(buf, t);
    const RunTrace back = read_trace_csv(buf);
    ASSERT_EQ(back.selector, t.selector);
    ASSERT_EQ(back.records.size(), t.records.size());
    for (std::size_t k = 0; k < t.records.size(); ++k) {
      const auto& a = t.records[k];
      const auto& b = back.records[k];
      EXPECT_EQ(a.k, b.k);
      EXPECT_EQ(a.index, b.index);
      EXPECT_EQ(a.u, b.u);
      EXPECT_EQ(a.y, b.y);
      EXPECT_EQ(a.value, b.value);
      EXPECT_EQ(a.index_star, b.index_star);
      EXPECT_EQ(a.value_star, b.value_star);
      EXPECT_EQ(a.decision, b.decision);
      EXPECT_EQ(a.values, b.values);
    }
  }
}

TEST(Trace, MalformedCsvIsRejected) {
  std::stringstream no_magic("k,selector\n");
  EXPECT_THROW(read_trace_csv(no_magic), Error);
  std::stringstream bad_row(
      "# upo-trace v1\nk,selector,iota,u,y,f,iota_star,f_star,case,h_left,h_center,h_right\n0,upo,1,x,1,1,1,1,init,0,0,0\n");
  EXPECT_THROW(read_trace_csv(bad_row), Error);
}

TEST(Experiment, DeterministicAndSelectorsShareNoise) {
  const auto a = run_experiment(small_parabola_config());
  const auto b = run_experiment(small_parabola_config());
  ASSERT_EQ(a.size(), 4u);
  for (std::size_t s = 0; s < a.size(); ++s) {
    for (std::size_t k = 0; k < a[s].records.size(); ++k) {
      EXPECT_EQ(a[s].records[k].index, b[s].records[k].index);
      EXPECT_EQ(a[s].records[k].y, b[s].records[k].y);
    }
  }
  // Same input at the same time means the same noisy measurement in every run.
  const Objective f = build_objective(small_parabola_config());
  for (const auto& t : a) {
    for (const auto& r : t.records) EXPECT_EQ(r.y, f.measure(r.k, r.index));
  }
}

TEST(Experiment, AddingASelectorDoesNotChangeOthers) {
  ExperimentConfig one = small_parabola_config();
  one.selectors = {SelectorConfig::defaults(SelectorKind::upo)};
  one.selectors[0].rho = one.rho;
  const auto alone = run_experiment(one);
  const auto together = run_experiment(small_parabola_config());
  ASSERT_EQ(alone[0].records.size(), together[0].records.size());
  for (std::size_t k = 0; k < alone[0].records.size(); ++k) {
    EXPECT_EQ(alone[0].records[k].index, together[0].records[k].index);
  }
}

TEST(Metrics, MatchIndependentAccumulation) {
  const auto traces = run_experiment(small_parabola_config());
  const ExperimentConfig c = small_parabola_config();
  const Objective f = build_objective(c);
  const References refs = compute_references(f, c.scan_interval(), c.horizon);
  const auto metrics = compute_metrics(traces, refs);
  double po_total = 0;
  for (const auto& r : traces[1].records) po_total += f.truth(r.k, r.index);
  for (std::size_t s = 0; s < traces.size(); ++s) {
    double total = 0;
    TimeIndex off = 0, moves = 0;
    const auto& rec = traces[s].records;
    for (std::size_t k = 0; k < rec.size(); ++k) {
      const double fk = f.truth(rec[k].k, rec[k].index);
      total += fk;
      const auto scan = scan_maximizer(f, rec[k].k, c.scan_interval());
      if (fk < scan.value) ++off;
      if (k > 0 && rec[k].index != rec[k - 1].index) ++moves;
    }
    EXPECT_NEAR(metrics[s].total_value, total, 1e-9 * std::abs(total));
    EXPECT_EQ(metrics[s].steps_off_optimum, off);
    EXPECT_EQ(metrics[s].perturbation_count, moves);
    ASSERT_TRUE(metrics[s].gain_vs_po_pct.has_value());
    EXPECT_NEAR(*metrics[s].gain_vs_po_pct, (total - po_total) / std::abs(po_total) * 100.0, 1e-9);
  }
  EXPECT_EQ(metrics[1].perturbation_count, c.horizon - 1);
}

TEST(Metrics, OracleTraceHasNoGap) {
  const ExperimentConfig c = small_parabola_config();
  const Objective f = build_objective(c);
  RunTrace oracle{"oracle", {}};
  for (TimeIndex k = 0; k < c.horizon; ++k) {
    const auto scan = scan_maximizer(f, k, c.scan_interval());
    TraceRecord r;
    r.k = k;
    r.index = scan.index;
    r.value = scan.value;
    r.index_star = scan.index;
    r.value_star = scan.value;
    oracle.records.push_back(r);
  }
  const References refs = compute_references(f, c.scan_interval(), c.horizon);
  const auto m = compute_metrics(std::span<const RunTrace>(&oracle, 1), refs);
  EXPECT_EQ(m[0].steps_off_optimum, 0);
  EXPECT_NEAR(m[0].oracle_gap_pct, 0.0, 1e-12);
  EXPECT_FALSE(m[0].gain_vs_po_pct.has_value());
  EXPECT_GE(m[0].gain_vs_constant_pct, 0.0);
}

TEST(Metrics, StaticObjectiveBestConstantIsTheOracle) {
  const InputGrid g(1.0, IndexInterval{0, 10});
  const Objective f = make_parabola(g, 1.0, 4.0, NoiseModel{});
  const References refs = compute_references(f, IndexInterval{0, 10}, 50);
  EXPECT_EQ(refs.best_constant_index, 4);
  EXPECT_DOUBLE_EQ(refs.best_constant_total, refs.oracle_total);
}

TEST(Metrics, HorizonMismatchThrows) {
  const auto traces = run_experiment(small_parabola_config());
  References refs;
  refs.horizon = 7;
  EXPECT_THROW(compute_metrics(traces, refs), Error);
}

TEST(Curves, HeaderAndRows) {
  const InputGrid g(1.0, IndexInterval{0, 3});
  const Objective f = make_parabola(g, 1.0, 1.0, NoiseModel{});
  std::ostringstream out;
  const TimeIndex ks[] = {0, 5};
  export_curves(f, ks, IndexInterval{0, 3}, out);
  EXPECT_EQ(out.str(), "k,u,value\n0,0,-1\n0,1,0\n0,2,-1\n0,3,-4\n5,0,-1\n5,1,0\n5,2,-1\n5,3,-4\n");
  std::ostringstream empty;
  export_curves(f, {}, IndexInterval{0, 3}, empty);
  EXPECT_EQ(empty.str(), "k,u,value\n");
}

TEST(Config, RoundTrip) {
  ExperimentConfig c = small_parabola_config();
  c.seed = 77;
  c.u0 = 5;
  c.selectors[0].tau = 0.125;
  std::stringstream buf;
  write_config(buf, c);
  const ExperimentConfig back = parse_config(buf);
  std::stringstream again;
  write_config(again, back);
  std::stringstream first;
  write_config(first, c);
  EXPECT_EQ(first.str(), again.str());
  EXPECT_EQ(back.seed, 77u);
  EXPECT_EQ(back.selectors[0].tau, 0.125);
}

TEST(Config, ErrorsNameTheLine) {
  auto message = [](const std::string& text) {
    std::istringstream in(text);
    try {
      parse_config(in, "cfg");
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message("run.seed = 1\nrun.bogus = 2\n").find("cfg:2"), std::string::npos);
  EXPECT_NE(message("# c\n\nrun.seed = abc\n").find("cfg:3"), std::string::npos);
  EXPECT_NE(message("run.seed = 1\nrun.seed = 2\n").find("cfg:2"), std::string::npos);
  EXPECT_NE(message("no equals sign\n").find("cfg:1"), std::string::npos);
  EXPECT_EQ(message("run.selectors = upo\nhei.alpha = 0.1\n").find("no error"), std::string::npos);
  EXPECT_EQ(message("run.selectors = upo,hei\nhei.alpha = 0.1\n"), "no error");
}

}  // namespace
}  // namespace upo
