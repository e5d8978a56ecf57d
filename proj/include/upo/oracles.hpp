#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "upo/belief.hpp"
#include "upo/harness.hpp"
#include "upo/objective.hpp"

namespace upo {

struct Measurement {
  TimeIndex time = 0;
  double y = 0.0;
};

/// Prediction for time `target` from the explicit weighted sums over the
/// history, without the recursion. Throws ContractViolation on an empty history.
Estimate direct_estimate(std::span<const Measurement> history, double lambda, int order, double rho,
                         TimeIndex target);

/// Inputs of the convergence constants.
struct ConvergenceInputs {
  double curvature = 1.0;  ///< L_b
  double drift = 0.0;      ///< L_k
  double delta_u = 1.0;
  double rho = 1.0;
  double tau = 0.1;
  double nu_star = 1.0;  ///< largest nu the tuning must cover
  TimeIndex k0 = 1;
};

struct ConvergenceConstants {
  double L_star = 0.0;
  TimeIndex N_window = 1;
  double d = 0.0;       ///< bound on |mu - f| for recently measured points
  double b_dead = 0.0;  ///< distance beyond which every step descends
  double gamma = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double lambda_star = 0.0;  ///< forgetting factors <= this always perturb
};

/// Class-K gain on the local-model deviation (constant part).
double alpha1(double lambda, const ConvergenceInputs& in);
/// Class-K gain on the local-model deviation (distance-proportional part).
double alpha2(double lambda, const ConvergenceInputs& in);

/// Explicit drift/descent/envelope constants and the forgetting-factor
/// threshold. Throws AssumptionViolation if curvature <= 0.
ConvergenceConstants convergence_constants(const ConvergenceInputs& in);

struct DriftReport {
  double L_star = 0.0;
  TimeIndex checks = 0;
  double worst_margin = 0.0;  ///< min of L* sqrt(N) - |u*_{k+N} - u*_k|
  std::optional<std::pair<TimeIndex, TimeIndex>> violation;  ///< (k, N)
};

/// Exhaustively check |u*_{k+N} - u*_k| <= L* sqrt(N) for k + N < horizon and
/// 1 <= N <= max_window. Constants are estimated over the same range unless given.
DriftReport check_drift_bound(const Objective& objective, IndexInterval interval, TimeIndex horizon,
                              TimeIndex max_window, std::optional<AssumptionConstants> constants = std::nullopt);

struct EnvelopeReport {
  double sup_distance = 0.0;
  double sup_bound = 0.0;  ///< |u0 - u0*| + c1
  double tail_distance = 0.0;
  double tail_bound = 0.0;  ///< c2
  TimeIndex tail_start = 0;
  bool always_perturbs = true;
  TimeIndex descent_checks = 0;
  std::optional<TimeIndex> sup_violation;
  std::optional<TimeIndex> tail_violation;
  std::optional<TimeIndex> descent_violation;
  std::optional<TimeIndex> first_stay;

  bool envelopes_hold() const { return !sup_violation && !tail_violation; }
};

/// Check the sup / trailing-window envelopes and the per-step descent
/// property beyond b_dead on a trace. The trailing window is the last 20%.
EnvelopeReport check_envelopes(const RunTrace& trace, const ConvergenceConstants& constants, double delta_u);

}  // namespace upo
