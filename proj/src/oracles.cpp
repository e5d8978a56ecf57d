#include "upo/oracles.hpp"

#include <cmath>
#include <algorithm>
#include <cstdlib>
#include <limits>
#include <numbers>

#include "upo/errors.hpp"

namespace upo {

Estimate direct_estimate(std::span<const Measurement> history, double lambda, int order, double rho,
                         TimeIndex target) {
  if (history.empty()) throw ContractViolation("direct estimate needs at least one measurement");
  double weighted = 0.0;
  double total = 0.0;
  for (const auto& m : history) {
    if (m.time >= target) throw ContractViolation("measurements must precede the target time");
    const double w = omega(m.time, target, lambda, order);
    weighted += w * m.y;
    total += w;
  }
  return Estimate{weighted / total, rho * rho / total};
}

namespace {

constexpr double kLambdaMax = 0.5;  // lambda** of the proof

double gain_prefactor(double lambda, const ConvergenceInputs& in) {
  return lambda / ((1.0 - lambda) * (1.0 - lambda)) * (in.nu_star * in.nu_star + 5.0);
}

// Smallest-safe inverse of an increasing gain on (0, kLambdaMax]; bisection in log space
// because thresholds can be many orders of magnitude below one.
template <class Gain>
double inverse_gain(Gain gain, double target) {
  if (gain(kLambdaMax) <= target) return kLambdaMax;
  double lo = -700.0;
  double hi = std::log(kLambdaMax);
  if (gain(std::exp(lo)) > target) return std::exp(lo);
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (gain(std::exp(mid)) <= target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::exp(lo);
}

}  // namespace

double alpha1(double lambda, const ConvergenceInputs& in) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("alpha1 needs lambda in (0, 1)");
  const double x = 1.0 / (std::numbers::e * std::log(1.0 / lambda));
  const double Lk = in.drift;
  const double Lb = in.curvature;
  return gain_prefactor(lambda, in) * (12.0 * in.rho + 120.0 * Lk + 3.0 * Lb * in.delta_u +
                                       (44.0 * Lk + 2.0 * in.rho + 0.5 * Lb * in.delta_u) * x + 16.0 * Lk * x * x);
}

double alpha2(double lambda, const ConvergenceInputs& in) {
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError("alpha2 needs lambda in (0, 1)");
  const double x = 1.0 / (std::numbers::e * std::log(1.0 / lambda));
  return gain_prefactor(lambda, in) * (6.0 + x) * in.curvature;
}

ConvergenceConstants convergence_constants(const ConvergenceInputs& in) {
  if (!(in.curvature > 0.0)) throw AssumptionViolation("curvature bound L_b must be positive", 0, 0);
  if (!(in.drift >= 0.0)) throw ParameterError("drift bound L_k must be nonnegative");
  if (!(in.delta_u > 0.0)) throw ParameterError("grid spacing must be positive");
  if (!(in.tau > 0.0)) throw ParameterError("tau must be positive");
  if (in.k0 < 0) throw ParameterError("k0 must be nonnegative");

  ConvergenceConstants c;
  c.L_star = 2.0 * std::sqrt(in.drift * in.delta_u / in.curvature);
  const auto root = static_cast<TimeIndex>(std::ceil(c.L_star / in.delta_u + 1.0));
  c.N_window = root * root;
  const double sqrtN = static_cast<double>(root);
  const double N = static_cast<double>(c.N_window);
  c.d = in.rho + 20.0 * in.drift;
  c.b_dead = 4.0 / in.curvature * (alpha1(kLambdaMax, in) + c.d + in.tau) + in.delta_u;
  c.gamma = c.L_star * sqrtN + (N - 1.0) * in.delta_u + c.b_dead;
  c.c1 = c.gamma + c.L_star * sqrtN + (static_cast<double>(in.k0) + N) * in.delta_u;
  c.c2 = c.gamma + c.L_star * sqrtN + N * in.delta_u;

  auto a1 = [&](double l) { return alpha1(l, in); };
  auto a2 = [&](double l) { return alpha2(l, in); };
  c.lambda_star = std::min({inverse_gain(a1, in.tau / 8.0), inverse_gain(a2, in.tau / (8.0 * c.b_dead)),
                            inverse_gain(a2, in.curvature / 4.0), kLambdaMax});
  return c;
}

DriftReport check_drift_bound(const Objective& objective, IndexInterval interval, TimeIndex horizon,
                              TimeIndex max_window, std::optional<AssumptionConstants> constants) {
  if (horizon <= 1) throw ParameterError("drift check needs a horizon of at least 2");
  if (max_window < 1) throw ParameterError("drift check needs max_window >= 1");
  const AssumptionConstants ac = constants ? *constants : estimate_assumption_constants(objective, interval, horizon);
  if (!(ac.curvature > 0.0)) throw AssumptionViolation("curvature bound L_b must be positive", 0, 0);
  const double du = objective.grid().spacing();

  std::vector<GridIndex> best(static_cast<std::size_t>(horizon));
  for (TimeIndex k = 0; k < horizon; ++k) best[static_cast<std::size_t>(k)] = true_maximizer(objective, k, interval);

  DriftReport report;
  report.L_star = 2.0 * std::sqrt(ac.drift * du / ac.curvature);
  report.worst_margin = std::numeric_limits<double>::infinity();
  for (TimeIndex k = 0; k < horizon; ++k) {
    for (TimeIndex n = 1; n <= max_window && k + n < horizon; ++n) {
      const double moved =
          static_cast<double>(std::llabs(best[static_cast<std::size_t>(k + n)] - best[static_cast<std::size_t>(k)])) *
          du;
      const double margin = report.L_star * std::sqrt(static_cast<double>(n)) - moved;
      ++report.checks;
      if (margin < report.worst_margin) report.worst_margin = margin;
      if (margin < -1e-12 * std::max(1.0, moved) && !report.violation) report.violation = std::make_pair(k, n);
    }
  }
  return report;
}

EnvelopeReport check_envelopes(const RunTrace& trace, const ConvergenceConstants& constants, double delta_u) {
  const auto& r = trace.records;
  if (r.empty()) throw ParameterError("envelope check needs a nonempty trace");
  EnvelopeReport report;
  const auto dist = [&](GridIndex a, GridIndex b) { return static_cast<double>(std::llabs(a - b)) * delta_u; };
  const auto H = static_cast<TimeIndex>(r.size());
  report.sup_bound = dist(r[0].index, r[0].index_star) + constants.c1;
  report.tail_bound = constants.c2;
  report.tail_start = H - H / 5;
  const double slack = 1e-9 * delta_u;
  for (TimeIndex k = 0; k < H; ++k) {
    const auto& rec = r[static_cast<std::size_t>(k)];
    const double e = dist(rec.index, rec.index_star);
    report.sup_distance = std::max(report.sup_distance, e);
    if (e > report.sup_bound + slack && !report.sup_violation) report.sup_violation = k;
    if (k >= report.tail_start) {
      report.tail_distance = std::max(report.tail_distance, e);
      if (e > report.tail_bound + slack && !report.tail_violation) report.tail_violation = k;
    }
    if (k + 1 < H) {
      const auto& next = r[static_cast<std::size_t>(k + 1)];
      if (next.index == rec.index) {
        report.always_perturbs = false;
        if (!report.first_stay) report.first_stay = k;
      }
      // Descent beyond b: one step closer to the next optimum (rule active from k >= 1).
      if (k >= 1 && dist(rec.index, next.index_star) >= constants.b_dead) {
        ++report.descent_checks;
        const auto before = std::llabs(rec.index - next.index_star);
        const auto after = std::llabs(next.index - next.index_star);
        if (after != before - 1 && !report.descent_violation) report.descent_violation = k;
      }
    }
  }
  return report;
}

}  // namespace upo
