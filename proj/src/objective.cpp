#include "upo/objective.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "upo/errors.hpp"

namespace upo {
namespace {

// splitmix64 finalizer; decorrelates neighboring (seed, k) pairs before seeding.
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

double NoiseModel::draw(TimeIndex k) const {
  std::mt19937_64 gen(mix(seed ^ mix(static_cast<std::uint64_t>(k))));
  std::normal_distribution<double> normal;
  double e = normal(gen);
  if (kind == NoiseKind::bounded) {
    while (std::abs(e) > 1.0) e = normal(gen);
  }
  return e;
}

Objective::Objective(InputGrid grid, Truth truth, NoiseModel noise)
    : grid_(std::move(grid)), truth_(std::move(truth)), noise_(noise) {
  if (!truth_) throw ParameterError("objective needs a truth function");
  if (!(noise_.scale >= 0.0)) throw ParameterError("noise scale must be nonnegative");
}

double Objective::truth(TimeIndex k, GridIndex i) const {
  grid_.check(i);
  return truth_(k, grid_.value(i));
}

double Objective::measure(TimeIndex k, GridIndex i) const {
  const double f = truth(k, i);
  if (noise_.scale == 0.0) return f;
  return f + noise_.scale * noise_.draw(k);
}

Objective Objective::with_noise(NoiseModel noise) const { return Objective(grid_, truth_, noise); }

MaximizerScan scan_maximizer(const Objective& objective, TimeIndex k, IndexInterval interval) {
  if (interval.hi < interval.lo) throw ParameterError("empty search interval");
  MaximizerScan best{interval.lo, objective.truth(k, interval.lo), true};
  for (GridIndex i = interval.lo + 1; i <= interval.hi; ++i) {
    const double f = objective.truth(k, i);
    if (f > best.value) {
      best = {i, f, true};
    } else if (f == best.value) {
      best.unique = false;
    }
  }
  return best;
}

GridIndex true_maximizer(const Objective& objective, TimeIndex k, IndexInterval interval) {
  const MaximizerScan scan = scan_maximizer(objective, k, interval);
  if (!scan.unique) {
    for (GridIndex i = scan.index + 1; i <= interval.hi; ++i) {
      if (objective.truth(k, i) == scan.value) throw NonUniqueMaximizer(k, scan.index, i);
    }
  }
  return scan.index;
}

AssumptionConstants estimate_assumption_constants(const Objective& objective, IndexInterval interval,
                                                  TimeIndex horizon, TimeIndex first) {
  if (interval.hi <= interval.lo) throw ParameterError("assumption scan needs at least two grid points");
  if (horizon <= first) throw ParameterError("assumption scan needs a nonempty time range");

  const double du = objective.grid().spacing();
  AssumptionConstants out;
  out.horizon = horizon;
  out.curvature = std::numeric_limits<double>::infinity();
  TimeIndex worst_k = first;
  GridIndex worst_i = interval.lo;

  for (TimeIndex k = first; k < horizon; ++k) {
    const GridIndex star = true_maximizer(objective, k, interval);
    const double u_star = objective.grid().value(star);
    for (GridIndex i = interval.lo; i <= interval.hi; ++i) {
      const double f = objective.truth(k, i);
      out.drift = std::max(out.drift, std::abs(objective.truth(k + 1, i) - f));
      if (i == interval.hi) continue;
      const double mid = (static_cast<double>(i) + 0.5) * du;
      const double ratio = (f - objective.truth(k, i + 1)) / (mid - u_star);
      if (ratio < out.curvature) {
        out.curvature = ratio;
        worst_k = k;
        worst_i = i;
      }
    }
  }
  if (!(out.curvature > 0.0)) {
    throw AssumptionViolation("curvature bound is not positive (" + std::to_string(out.curvature) + ")", worst_k,
                              worst_i);
  }
  return out;
}

Objective make_parabola(const InputGrid& grid, double curvature, double center, NoiseModel noise) {
  return make_drifting_parabola(grid, curvature, center, 0.0, noise);
}

Objective make_drifting_parabola(const InputGrid& grid, double curvature, double center, double rate,
                                 NoiseModel noise, double offset_rate) {
  if (!(curvature > 0.0)) throw ParameterError("parabola curvature must be positive");
  return Objective(
      grid,
      [=](TimeIndex k, double u) {
        const double kk = static_cast<double>(k);
        const double d = u - (center + rate * kk);
        return -curvature * d * d + offset_rate * kk;
      },
      noise);
}

Objective make_oscillating_parabola(const InputGrid& grid, double curvature, double center, double amplitude,
                                    double period, NoiseModel noise) {
  if (!(curvature > 0.0)) throw ParameterError("parabola curvature must be positive");
  if (!(period > 0.0)) throw ParameterError("oscillation period must be positive");
  return Objective(
      grid,
      [=](TimeIndex k, double u) {
        const double c = center + amplitude * std::sin(2.0 * std::numbers::pi * static_cast<double>(k) / period);
        const double d = u - c;
        return -curvature * d * d;
      },
      noise);
}

}  // namespace upo
