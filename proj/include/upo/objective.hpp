#pragma once

#include <cstdint>
#include <functional>

#include "upo/grid.hpp"

namespace upo {

enum class NoiseKind {
  gaussian,  ///< standard normal
  bounded,   ///< standard normal truncated to |e| <= 1 by redrawing
};

/// Additive measurement noise rho * e_k. The draw for time k depends only on
/// (seed, k), so every consumer of the same run sees the same realization.
struct NoiseModel {
  double scale = 0.0;
  NoiseKind kind = NoiseKind::gaussian;
  std::uint64_t seed = 0;

  /// Unscaled draw e_k.
  double draw(TimeIndex k) const;
};

/// Time-varying objective f_k(u) on an input grid with a noisy measurement channel
/// y_k = f_k(u_k) + rho * e_k. Copies share the (pure) truth function.
class Objective {
 public:
  using Truth = std::function<double(TimeIndex k, double u)>;

  Objective(InputGrid grid, Truth truth, NoiseModel noise);

  const InputGrid& grid() const { return grid_; }
  const NoiseModel& noise() const { return noise_; }

  double truth(TimeIndex k, GridIndex i) const;
  double measure(TimeIndex k, GridIndex i) const;

  /// Same truth and grid with a different noise channel.
  Objective with_noise(NoiseModel noise) const;

 private:
  InputGrid grid_;
  Truth truth_;
  NoiseModel noise_;
};

struct MaximizerScan {
  GridIndex index = 0;  ///< lowest index attaining the maximum
  double value = 0.0;
  bool unique = true;
};

/// Exhaustive scan of f_k over `interval`; ties are reported, not rejected.
MaximizerScan scan_maximizer(const Objective& objective, TimeIndex k, IndexInterval interval);

/// Unique maximizer of f_k over `interval`. Throws NonUniqueMaximizer on ties.
GridIndex true_maximizer(const Objective& objective, TimeIndex k, IndexInterval interval);

/// Curvature lower bound and per-step drift bound of an objective, measured on its truth.
struct AssumptionConstants {
  double curvature = 0.0;  ///< L_b
  double drift = 0.0;      ///< L_k
  TimeIndex horizon = 0;
};

/// Sampling-based estimate over `interval` and times [first, horizon).
/// drift = max |f_{k+1}(u) - f_k(u)|; curvature = min over (k, i) of
/// (f_k(u_i) - f_k(u_{i+1})) / (u_{i+1/2} - u*_k). Throws AssumptionViolation
/// with a witness when that minimum is not positive, and NonUniqueMaximizer
/// when some f_k has no unique maximizer.
AssumptionConstants estimate_assumption_constants(const Objective& objective, IndexInterval interval,
                                                  TimeIndex horizon, TimeIndex first = 0);

// Synthetic objectives. All are concave parabolas -a (u - c_k)^2 + s k with
// different center trajectories c_k.

/// Static parabola.
Objective make_parabola(const InputGrid& grid, double curvature, double center, NoiseModel noise);

/// Center moves linearly: c_k = center + rate * k; `offset_rate` adds a uniform vertical shift per step.
Objective make_drifting_parabola(const InputGrid& grid, double curvature, double center, double rate,
                                 NoiseModel noise, double offset_rate = 0.0);

/// Center oscillates: c_k = center + amplitude * sin(2 pi k / period).
Objective make_oscillating_parabola(const InputGrid& grid, double curvature, double center,
                                    double amplitude, double period, NoiseModel noise);

}  // namespace upo
