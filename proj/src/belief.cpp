#include "upo/belief.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "upo/errors.hpp"

namespace upo {
namespace {

void check_lambda(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0)) {
    throw ParameterError("forgetting factor must lie in (0, 1), got " + std::to_string(lambda));
  }
}

double factorial(int q) {
  double f = 1.0;
  for (int i = 2; i <= q; ++i) f *= i;
  return f;
}

}  // namespace

double zeta(TimeIndex j, TimeIndex k, int q, double lambda) {
  check_lambda(lambda);
  if (k < j) throw ParameterError("weight requested for a future measurement (k < j)");
  if (q < 0) throw ParameterError("weight order index must be nonnegative");
  const double age = static_cast<double>(k - j);
  if (age == 0.0) return q == 0 ? 1.0 : 0.0;
  return std::pow(std::log(1.0 / lambda) * age, q) / factorial(q) * std::pow(lambda, age);
}

double omega(TimeIndex j, TimeIndex k, double lambda, int order) {
  double w = 0.0;
  for (int q = 0; q <= order; ++q) w += zeta(j, k, q, lambda);
  return w;
}

WeightingOperator::WeightingOperator(double lambda, int order)
    : lambda_(lambda), order_(order), log_inv_lambda_(0.0) {
  check_lambda(lambda);
  if (order < 0) throw ParameterError("weight order must be nonnegative");
  log_inv_lambda_ = std::log(1.0 / lambda);
  band_.resize(dim());
  double term = lambda;
  for (int d = 0; d <= order; ++d) {
    band_[d] = term;
    term *= log_inv_lambda_ / (d + 1);
  }
}

std::vector<double> WeightingOperator::matrix() const {
  const std::size_t n = dim();
  std::vector<double> a(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t s = 0; s <= r; ++s) a[r * n + s] = band_[r - s];
  }
  return a;
}

double WeightingOperator::power_entry(TimeIndex n, int r, int s) const {
  if (n < 0) throw ParameterError("negative matrix power");
  if (r < s) return 0.0;
  return zeta(0, n, r - s, lambda_);
}

void WeightingOperator::apply_power(std::span<double> x, TimeIndex n) const {
  if (n == 0) return;
  std::vector<double> band(dim());
  for (int d = 0; d <= order_; ++d) band[d] = power_entry(n, d, 0);
  for (int r = order_; r >= 0; --r) {
    double acc = 0.0;
    for (int s = 0; s <= r; ++s) acc += band[r - s] * x[s];
    x[r] = std::abs(acc) < kUnderflow ? 0.0 : acc;
  }
}

double WeightingOperator::readout(std::span<const double> x) const {
  // c^T A x = sum_s x_s * (sum of band entries that reach row >= s)
  double total = 0.0;
  double tail = 0.0;
  for (int s = order_; s >= 0; --s) {
    tail += band_[order_ - s];
    total += tail * x[s];
  }
  return total;
}

std::optional<Estimate> estimate(const PointState& state, const WeightingOperator& op, double rho) {
  if (!state.measured()) return std::nullopt;
  const double weight = op.readout(state.phi);
  if (!(weight > 0.0)) return std::nullopt;
  return Estimate{op.readout(state.xi) / weight, rho * rho / weight};
}

BeliefState::BeliefState(WeightingOperator op) : op_(std::move(op)) {}

void BeliefState::advance(PointState& state) const {
  const TimeIndex elapsed = time_ - state.time;
  if (elapsed > 0) {
    op_.apply_power(state.xi, elapsed);
    op_.apply_power(state.phi, elapsed);
    state.time = time_;
  }
  if (std::all_of(state.phi.begin(), state.phi.end(), [](double v) { return v == 0.0; })) {
    std::fill(state.xi.begin(), state.xi.end(), 0.0);
    state.last_measured = -1;
  }
}

void BeliefState::update(TimeIndex k, GridIndex index, double y) {
  if (k <= time_) {
    throw ContractViolation("belief updates must move forward in time (k=" + std::to_string(k) +
                            ", last=" + std::to_string(time_) + ")");
  }
  time_ = k;
  auto [it, inserted] = points_.try_emplace(index);
  PointState& state = it->second;
  if (inserted) {
    state.xi.assign(op_.dim(), 0.0);
    state.phi.assign(op_.dim(), 0.0);
    state.time = k;
  }
  advance(state);
  state.xi[0] += y;
  state.phi[0] += 1.0;
  state.last_measured = k;
}

PointState BeliefState::point(GridIndex index) const {
  const auto it = points_.find(index);
  if (it == points_.end()) {
    PointState empty;
    empty.xi.assign(op_.dim(), 0.0);
    empty.phi.assign(op_.dim(), 0.0);
    empty.time = time_;
    return empty;
  }
  PointState state = it->second;
  advance(state);
  return state;
}

std::optional<Estimate> BeliefState::estimate(GridIndex index, double rho) const {
  return upo::estimate(point(index), op_, rho);
}

TimeIndex BeliefState::last_measured(GridIndex index) const {
  const auto it = points_.find(index);
  if (it == points_.end()) return -1;
  return point(index).last_measured;
}

BeliefState BeliefState::restore(WeightingOperator op, TimeIndex time, std::map<GridIndex, PointState> points) {
  BeliefState belief(std::move(op));
  for (const auto& [index, state] : points) {
    if (state.xi.size() != belief.op_.dim() || state.phi.size() != belief.op_.dim()) {
      throw ContractViolation("snapshot vector length does not match the weight order");
    }
    if (state.time > time) throw ContractViolation("snapshot point is newer than the snapshot time");
  }
  belief.time_ = time;
  belief.points_ = std::move(points);
  return belief;
}

}  // namespace upo
