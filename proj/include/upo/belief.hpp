#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "upo/grid.hpp"

namespace upo {

/// Weight kernel term (1/q!) (ln(1/lambda) (k - j))^q lambda^(k - j), with 0^0 = 1.
/// Throws ParameterError unless lambda is in (0, 1), k >= j and q >= 0.
double zeta(TimeIndex j, TimeIndex k, int q, double lambda);

/// Information weight of a measurement taken at j when predicting time k:
/// sum of zeta(j, k, q) for q = 0..order. Equals 1 at j == k and decays to 0.
double omega(TimeIndex j, TimeIndex k, double lambda, int order);

/// The forgetting recursion x <- A x + b v with A = lambda * exp(ln(1/lambda) S),
/// S the (order+1)-dimensional down-shift, b = e_0 and readout c = ones.
///
/// A is lower-triangular Toeplitz and its powers have the closed form
/// (A^n)[r][s] = zeta(0, n, r - s), which is what the lazy decay uses.
class WeightingOperator {
 public:
  WeightingOperator(double lambda, int order);

  double lambda() const { return lambda_; }
  int order() const { return order_; }
  std::size_t dim() const { return static_cast<std::size_t>(order_) + 1; }

  /// Dense row-major A.
  std::vector<double> matrix() const;

  /// Entry (r, s) of A^n, zero above the diagonal.
  double power_entry(TimeIndex n, int r, int s) const;

  /// x <- A^n x, flushing entries below the underflow threshold to zero.
  void apply_power(std::span<double> x, TimeIndex n) const;

  /// c^T A x, the one-step look-ahead readout.
  double readout(std::span<const double> x) const;

  /// Values below this are flushed to zero during decay.
  static constexpr double kUnderflow = 1e-300;

 private:
  double lambda_;
  int order_;
  double log_inv_lambda_;
  std::vector<double> band_;  // band_[d] = lambda * ln(1/lambda)^d / d!
};

/// Recursion state of one grid point. `time` is the step the vectors refer to.
struct PointState {
  std::vector<double> xi;
  std::vector<double> phi;
  TimeIndex last_measured = -1;
  TimeIndex time = -1;

  bool measured() const { return last_measured >= 0; }
};

/// Maximum-likelihood prediction for the next step and its variance.
struct Estimate {
  double mean = 0.0;
  double variance = 0.0;
};

/// One-step-ahead estimate from a point state: mean = c^T A xi / c^T A phi,
/// variance = rho^2 / c^T A phi. Empty when the point was never measured.
std::optional<Estimate> estimate(const PointState& state, const WeightingOperator& op, double rho);

/// Sparse per-grid-point recursion. Only measured points are stored; the
/// shared decay A is applied lazily when a point is read or written, so the
/// per-step cost does not depend on how many points were visited.
class BeliefState {
 public:
  explicit BeliefState(WeightingOperator op);

  const WeightingOperator& op() const { return op_; }
  /// Time of the latest update, -1 before the first one.
  TimeIndex time() const { return time_; }

  /// Incorporate measurement y taken at `index` at time k (k strictly increasing).
  void update(TimeIndex k, GridIndex index, double y);

  /// State of `index` advanced to time(); zero vectors if never measured or forgotten.
  PointState point(GridIndex index) const;

  /// Prediction for time() + 1.
  std::optional<Estimate> estimate(GridIndex index, double rho) const;

  /// Last time `index` was measured, -1 if never (or fully forgotten).
  TimeIndex last_measured(GridIndex index) const;

  std::size_t tracked_points() const { return points_.size(); }

  /// Stored (not advanced) per-point records, ordered by index.
  const std::map<GridIndex, PointState>& raw_points() const { return points_; }

  /// Rebuild from stored records (as produced by raw_points()).
  static BeliefState restore(WeightingOperator op, TimeIndex time, std::map<GridIndex, PointState> points);

 private:
  void advance(PointState& state) const;

  WeightingOperator op_;
  TimeIndex time_ = -1;
  std::map<GridIndex, PointState> points_;
};

}  // namespace upo
