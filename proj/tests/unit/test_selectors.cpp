#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "upo/errors.hpp"
#include "upo/normal.hpp"
#include "upo/selectors.hpp"

namespace upo {
namespace {

LocalModel model(double l, double c, double r) { return LocalModel{10, {l, c, r}, LocalCase::all_measured}; }

TEST(UpoSelect, ClearLeadStays) {
  const Decision d = upo_select(10, model(1.0, 2.0, 1.5), {5, 10, 9}, 0.01);
  EXPECT_EQ(d.kind, DecisionCase::argmax_stay);
  EXPECT_EQ(d.next, 10);
}

TEST(UpoSelect, NarrowLeadForcesProbeOfStaleSide) {
  const Decision d = upo_select(10, model(1.0, 2.0, 1.995), {5, 10, 9}, 0.01);
  EXPECT_EQ(d.kind, DecisionCase::forced_left);
  EXPECT_EQ(d.next, 9);
  const Decision m = upo_select(10, model(1.995, 2.0, 1.0), {9, 10, 5}, 0.01);
  EXPECT_EQ(m.kind, DecisionCase::forced_right);
  EXPECT_EQ(m.next, 11);
}

TEST(UpoSelect, ArgmaxMoves) {
  EXPECT_EQ(upo_select(10, model(3, 2, 1), {5, 10, 9}, 0.01).next, 9);
  EXPECT_EQ(upo_select(10, model(1, 2, 3), {5, 10, 9}, 0.01).next, 11);
}

TEST(UpoSelect, ForcedCasesNeverBothApplyAndStaysNeedSuperiority) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> h(-1, 1);
  std::uniform_int_distribution<int> t(-1, 8);
  for (int trial = 0; trial < 100000; ++trial) {
    const LocalModel m = model(h(rng), h(rng), h(rng));
    const RecencyTriple p{t(rng), 9, t(rng)};
    const double tau = 0.2;
    const bool case1 = p[0] < p[2] && m.h[1] - m.h[2] >= 0 && m.h[1] - m.h[2] <= tau;
    const bool case2 = p[0] > p[2] && m.h[1] - m.h[0] >= 0 && m.h[1] - m.h[0] <= tau;
    ASSERT_FALSE(case1 && case2);
    const Decision d = upo_select(10, m, p, tau);
    ASSERT_LE(std::abs(d.next - 10), 1);
    if (d.next == 10) {
      ASSERT_GE(m.h[1], m.h[0]);
      ASSERT_GE(m.h[1], m.h[2]);
      if (p[0] < p[2]) ASSERT_GT(m.h[1] - m.h[2], tau);
      if (p[0] > p[2]) ASSERT_GT(m.h[1] - m.h[0], tau);
    }
  }
}

TEST(ArgmaxTies, PreferStayThenStaleThenLeft) {
  EXPECT_EQ(argmax_with_ties({1, 1, 1}, {0, 5, 3}), 1);
  EXPECT_EQ(argmax_with_ties({2, 1, 2}, {4, 5, 3}), 2);
  EXPECT_EQ(argmax_with_ties({2, 1, 2}, {3, 5, 4}), 0);
  EXPECT_EQ(argmax_with_ties({2, 1, 2}, {3, 5, 3}), 0);
}

TEST(StandardPo, DirectionRule) {
  EXPECT_EQ(standard_po_step(1.0, 1, 5, 1.0).direction, 1);  // equality keeps direction
  const PoStep down = standard_po_step(2.0, 1, 5, 1.0);
  EXPECT_EQ(down.direction, -1);
  EXPECT_EQ(down.next, 4);
  EXPECT_THROW(standard_po_step(0, 0, 5, 1), ParameterError);
}

TEST(StandardPo, NoiselessParabolaLimitCycle) {
  const InputGrid g(1.0);
  const Objective f = make_parabola(g, 1.0, 0.3, NoiseModel{});
  ClosedLoop loop(f, std::make_unique<StandardPoSelector>(g, 1), -6);
  std::vector<GridIndex> seen;
  for (int k = 0; k < 60; ++k) seen.push_back(loop.step().index);
  for (std::size_t k = 1; k < seen.size(); ++k) EXPECT_EQ(std::abs(seen[k] - seen[k - 1]), 1);
  // After the climb it cycles over the peak's neighborhood forever.
  for (std::size_t k = 20; k < seen.size(); ++k) {
    EXPECT_GE(seen[k], -1);
    EXPECT_LE(seen[k], 1);
  }
}

TEST(Normal, Constants) {
  EXPECT_NEAR(normal_cdf(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-15);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_cdf(-8.0), 6.220960574271785e-16, 1e-25);
}

TEST(Hei, PureExplorationPicksHighVariance) {
  const EstimateTriple t{Estimate{0, 4}, Estimate{0, 1}, Estimate{0, 1}};
  const Decision d = hei_select(10, t, 0.0);
  EXPECT_EQ(d.next, 9);
  EXPECT_NEAR(d.values[0], 2.0 * normal_pdf(0.0), 1e-15);
}

TEST(Hei, DominantMeanWins) {
  const EstimateTriple t{Estimate{0, 1e-6}, Estimate{0, 1e-6}, Estimate{10, 1e-6}};
  EXPECT_EQ(hei_select(10, t, 1e-4).next, 11);
}

TEST(Hei, InfeasibleCandidatesAreSkipped) {
  const EstimateTriple t{Estimate{0, 1}, Estimate{0, 1}, Estimate{0, 1e8}};
  EXPECT_EQ(hei_select(10, t, 1e-4, {0, 0, 0}, {true, true, false}).next, 10);
}

TEST(FillUnmeasured, Extrapolates) {
  const auto t = fill_unmeasured({std::nullopt, Estimate{3, 1}, Estimate{1, 1}}, 5.0, 1e-6);
  EXPECT_DOUBLE_EQ(t[0]->mean, 5.0);
  EXPECT_DOUBLE_EQ(t[0]->variance, 25.0 / 1e-6);
  EXPECT_THROW(fill_unmeasured({Estimate{1, 1}, std::nullopt, Estimate{1, 1}}, 5.0, 1e-6), ContractViolation);
}

TEST(Thompson, TinyVarianceFollowsTheMeans) {
  std::mt19937_64 rng(2);
  const EstimateTriple t{Estimate{0, 1e-8}, Estimate{1, 1e-8}, Estimate{0.5, 1e-8}};
  int hits = 0;
  for (int i = 0; i < 10000; ++i) hits += thompson_select(10, t, rng).next == 10;
  EXPECT_GE(hits, 9900);
}

TEST(Thompson, SymmetricBeliefsChooseUniformly) {
  std::mt19937_64 rng(3);
  const EstimateTriple t{Estimate{0, 1}, Estimate{0, 1}, Estimate{0, 1}};
  int count[3] = {0, 0, 0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++count[thompson_select(10, t, rng).next - 9];
  for (int c : count) EXPECT_NEAR(static_cast<double>(c) / n, 1.0 / 3.0, 0.02);
}

TEST(Thompson, SeededReplay) {
  const InputGrid g(1.0);
  const Objective f = make_parabola(g, 0.5, 0.0, NoiseModel{1.0, NoiseKind::gaussian, 4});
  auto run = [&] {
    ClosedLoop loop(f, make_selector(SelectorConfig::defaults(SelectorKind::thompson), g, 1, 99), 5);
    std::vector<GridIndex> path;
    for (int k = 0; k < 100; ++k) path.push_back(loop.step().index);
    return path;
  };
  EXPECT_EQ(run(), run());
}

TEST(ClampToGrid, ForcedReflectsArgmaxStays) {
  const InputGrid g(1.0, IndexInterval{0, 5});
  const Decision forced = clamp_to_grid(Decision{-1, DecisionCase::forced_left, {}, false}, 0, g);
  EXPECT_EQ(forced.next, 1);
  EXPECT_TRUE(forced.clamped);
  const Decision argmax = clamp_to_grid(Decision{6, DecisionCase::argmax_right, {}, false}, 5, g);
  EXPECT_EQ(argmax.next, 5);
  const Decision inside = clamp_to_grid(Decision{3, DecisionCase::argmax_left, {}, false}, 4, g);
  EXPECT_FALSE(inside.clamped);
}

TEST(SelectorConfig, Validation) {
  SelectorConfig c;
  EXPECT_NO_THROW(c.validate());
  c.lambda = 1.0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = SelectorConfig{};
  c.tau = 0.0;
  EXPECT_THROW(c.validate(), ParameterError);
  EXPECT_EQ(SelectorConfig::defaults(SelectorKind::hei).lambda, 0.95);
  EXPECT_EQ(SelectorConfig::defaults(SelectorKind::thompson).order, 0);
  EXPECT_EQ(parse_selector_kind("po"), SelectorKind::standard_po);
  EXPECT_THROW(parse_selector_kind("gradient"), ParameterError);
}

TEST(UpoClosedLoop, NoiselessStaticClimbThenHold) {
  const InputGrid g(1.0);
  const Objective f = make_parabola(g, 1.0, 0.2, NoiseModel{});
  SelectorConfig cfg = SelectorConfig::defaults(SelectorKind::upo);
  cfg.rho = 1e-3;
  cfg.tau = 1e-3;
  const GridIndex start = -8;
  ClosedLoop loop(f, make_selector(cfg, g, 1, 0), start);
  TimeIndex reached = -1;
  int stays = 0;
  for (TimeIndex k = 0; k < 80; ++k) {
    const auto s = loop.step();
    if (reached < 0 && s.index == 0) reached = k;
    if (reached >= 0) {
      EXPECT_LE(std::abs(s.index), 1) << "k=" << k;
      stays += s.decision.next == s.index;
    }
  }
  ASSERT_GE(reached, 0);
  EXPECT_LE(reached, 8 + 3);
  EXPECT_GT(stays, 20);
}

TEST(UpoClosedLoop, EverySelectorMovesAtMostOneStep) {
  const InputGrid g(1.0, IndexInterval{0, 12});
  const Objective f = make_drifting_parabola(g, 0.3, 2.0, 0.05, NoiseModel{2.0, NoiseKind::gaussian, 8});
  for (auto kind : {SelectorKind::upo, SelectorKind::standard_po, SelectorKind::hei, SelectorKind::thompson}) {
    ClosedLoop loop(f, make_selector(SelectorConfig::defaults(kind), g, -1, 3), 6);
    GridIndex prev = loop.current();
    for (int k = 0; k < 200; ++k) {
      const auto s = loop.step();
      ASSERT_LE(std::abs(s.decision.next - prev), 1);
      ASSERT_TRUE(g.contains(s.decision.next));
      prev = s.decision.next;
    }
  }
}

}  // namespace
}  // namespace upo
