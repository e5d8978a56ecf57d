#include <gtest/gtest.h>

#include <cmath>

#include "upo/errors.hpp"
#include "upo/objective.hpp"

namespace upo {
namespace {

TEST(InputGrid, ValuesAndNearest) {
  const InputGrid g(0.05, IndexInterval{1, 19});
  EXPECT_DOUBLE_EQ(g.value(10), 0.5);
  EXPECT_EQ(g.nearest(0.5), 10);
  EXPECT_EQ(g.nearest(0.524), 10);
  EXPECT_EQ(g.nearest(0.526), 11);
  EXPECT_EQ(g.midpoint(), 10);
  EXPECT_TRUE(g.contains(1));
  EXPECT_FALSE(g.contains(0));
  EXPECT_THROW(g.check(20), BoundsError);
  EXPECT_NO_THROW(g.check(19));
}

TEST(InputGrid, RejectsBadParameters) {
  EXPECT_THROW(InputGrid(0.0), ParameterError);
  EXPECT_THROW(InputGrid(-1.0), ParameterError);
  EXPECT_THROW(InputGrid(1.0, IndexInterval{3, 3}), ParameterError);
  const InputGrid unbounded(1.0);
  EXPECT_TRUE(unbounded.contains(-1000000));
  EXPECT_EQ(unbounded.midpoint(), 0);
}

TEST(Objective, NoiselessMeasurementEqualsTruth) {
  const InputGrid g(1.0);
  const Objective f(g, [](TimeIndex, double u) { return u * u; }, NoiseModel{0.0});
  EXPECT_DOUBLE_EQ(f.measure(3, 1), 1.0);
  EXPECT_DOUBLE_EQ(f.truth(3, -2), 4.0);
}

TEST(NoiseModel, DeterministicPerSeedAndTime) {
  const NoiseModel a{1.0, NoiseKind::gaussian, 7};
  const NoiseModel b{1.0, NoiseKind::gaussian, 7};
  const NoiseModel c{1.0, NoiseKind::gaussian, 8};
  int differ = 0;
  for (TimeIndex k = 0; k < 100; ++k) {
    EXPECT_EQ(a.draw(k), b.draw(k));
    differ += a.draw(k) != c.draw(k);
  }
  EXPECT_GT(differ, 95);
}

TEST(NoiseModel, GaussianScaleMatchesRho) {
  const InputGrid g(1.0);
  const Objective f(g, [](TimeIndex, double) { return 0.0; }, NoiseModel{5.0, NoiseKind::gaussian, 1});
  const int n = 100000;
  double sum = 0.0, sq = 0.0;
  for (TimeIndex k = 0; k < n; ++k) {
    const double y = f.measure(k, 0);
    sum += y;
    sq += y * y;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  EXPECT_NEAR(mean, 0.0, 0.1);
  EXPECT_NEAR(sd, 5.0, 0.1);
}

TEST(NoiseModel, BoundedNeverExceedsOne) {
  const NoiseModel n{1.0, NoiseKind::bounded, 3};
  double worst = 0.0;
  for (TimeIndex k = 0; k < 1000000; ++k) worst = std::max(worst, std::abs(n.draw(k)));
  EXPECT_LE(worst, 1.0);
  EXPECT_GT(worst, 0.99);
}

TEST(Maximizer, ParabolaPeak) {
  const InputGrid g(0.5);
  const Objective f = make_parabola(g, 1.0, 1.2, NoiseModel{});
  EXPECT_EQ(true_maximizer(f, 0, IndexInterval{-10, 10}), 2);
  const MaximizerScan s = scan_maximizer(f, 0, IndexInterval{-10, 10});
  EXPECT_TRUE(s.unique);
  EXPECT_NEAR(s.value, -0.04, 1e-12);
}

TEST(Maximizer, TiesAreReported) {
  const InputGrid g(1.0);
  const Objective f = make_parabola(g, 1.0, 0.5, NoiseModel{});
  const MaximizerScan s = scan_maximizer(f, 0, IndexInterval{-3, 3});
  EXPECT_FALSE(s.unique);
  EXPECT_EQ(s.index, 0);
  try {
    true_maximizer(f, 0, IndexInterval{-3, 3});
    FAIL() << "expected NonUniqueMaximizer";
  } catch (const NonUniqueMaximizer& e) {
    EXPECT_EQ(e.first(), 0);
    EXPECT_EQ(e.second(), 1);
  }
}

TEST(Maximizer, DriftingParabolaFollowsCenter) {
  const InputGrid g(0.1);
  const Objective f = make_drifting_parabola(g, 2.0, 0.0, 0.01, NoiseModel{});
  EXPECT_EQ(true_maximizer(f, 0, IndexInterval{-50, 50}), 0);
  EXPECT_EQ(true_maximizer(f, 100, IndexInterval{-50, 50}), 10);
}

TEST(AssumptionConstants, StaticParabolaCurvatureIsTwoDeltaU) {
  const InputGrid g(0.5);
  const Objective f = make_parabola(g, 1.0, 0.0, NoiseModel{});
  const auto c = estimate_assumption_constants(f, IndexInterval{-10, 10}, 5);
  EXPECT_NEAR(c.curvature, 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(c.drift, 0.0);
}

TEST(AssumptionConstants, VerticalShiftIsTheDrift) {
  const InputGrid g(0.5);
  const Objective f = make_drifting_parabola(g, 1.0, 0.0, 0.0, NoiseModel{}, 0.3);
  const auto c = estimate_assumption_constants(f, IndexInterval{-10, 10}, 20);
  EXPECT_NEAR(c.drift, 0.3, 1e-12);
  EXPECT_NEAR(c.curvature, 1.0, 1e-12);
}

TEST(AssumptionConstants, NonConcaveObjectiveIsRejected) {
  const InputGrid g(1.0);
  // Two separated peaks: the ratio turns negative between them.
  const Objective f(g, [](TimeIndex, double u) { return std::cos(u); }, NoiseModel{});
  EXPECT_THROW(estimate_assumption_constants(f, IndexInterval{-6, 6}, 2), AssumptionViolation);
}

}  // namespace
}  // namespace upo
