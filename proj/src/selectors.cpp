#include "upo/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "upo/errors.hpp"
#include "upo/normal.hpp"

namespace upo {

const char* to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::upo:
      return "upo";
    case SelectorKind::standard_po:
      return "standard_po";
    case SelectorKind::hei:
      return "hei";
    case SelectorKind::thompson:
      return "thompson";
  }
  return "?";
}

SelectorKind parse_selector_kind(std::string_view name) {
  if (name == "upo") return SelectorKind::upo;
  if (name == "standard_po" || name == "po") return SelectorKind::standard_po;
  if (name == "hei") return SelectorKind::hei;
  if (name == "thompson") return SelectorKind::thompson;
  throw ParameterError("unknown selector '" + std::string(name) + "'");
}

const char* to_string(DecisionCase c) {
  switch (c) {
    case DecisionCase::init:
      return "init";
    case DecisionCase::forced_left:
      return "forced_left";
    case DecisionCase::forced_right:
      return "forced_right";
    case DecisionCase::argmax_stay:
      return "argmax_stay";
    case DecisionCase::argmax_left:
      return "argmax_left";
    case DecisionCase::argmax_right:
      return "argmax_right";
    case DecisionCase::keep_direction:
      return "keep_direction";
    case DecisionCase::reverse_direction:
      return "reverse_direction";
  }
  return "?";
}

SelectorConfig SelectorConfig::defaults(SelectorKind kind) {
  SelectorConfig c;
  c.kind = kind;
  if (kind == SelectorKind::hei || kind == SelectorKind::thompson) {
    c.lambda = 0.95;
    c.order = 0;
  }
  return c;
}

void SelectorConfig::validate() const {
  const std::string who = to_string(kind);
  if (!(tau > 0.0)) throw ParameterError(who + ": tau must be positive");
  if (!(nu > 0.0)) throw ParameterError(who + ": nu must be positive");
  if (!(alpha >= 0.0)) throw ParameterError(who + ": alpha must be nonnegative");
  if (!(lambda > 0.0 && lambda < 1.0)) throw ParameterError(who + ": lambda must lie in (0, 1)");
  if (order < 0) throw ParameterError(who + ": order must be nonnegative");
  if (!(rho > 0.0)) throw ParameterError(who + ": rho must be positive");
  if (!(variance_floor_phi > 0.0)) throw ParameterError(who + ": variance_floor_phi must be positive");
}

int argmax_with_ties(const std::array<double, 3>& values, const RecencyTriple& recency) {
  const double best = std::max({values[0], values[1], values[2]});
  if (values[1] == best) return 1;
  const bool left = values[0] == best;
  const bool right = values[2] == best;
  if (left && right) return recency[2] < recency[0] ? 2 : 0;
  return left ? 0 : 2;
}

namespace {

DecisionCase argmax_case(int offset) {
  switch (offset) {
    case 0:
      return DecisionCase::argmax_left;
    case 1:
      return DecisionCase::argmax_stay;
    default:
      return DecisionCase::argmax_right;
  }
}

Decision argmax_decision(GridIndex current, const std::array<double, 3>& values, const RecencyTriple& recency) {
  const int offset = argmax_with_ties(values, recency);
  return Decision{current + offset - 1, argmax_case(offset), values, false};
}

}  // namespace

Decision upo_select(GridIndex current, const LocalModel& local, const RecencyTriple& recency, double tau) {
  const auto& h = local.h;
  const double lead_right = h[1] - h[2];
  const double lead_left = h[1] - h[0];
  if (recency[0] < recency[2] && lead_right >= 0.0 && lead_right <= tau) {
    return Decision{current - 1, DecisionCase::forced_left, h, false};
  }
  if (recency[0] > recency[2] && lead_left >= 0.0 && lead_left <= tau) {
    return Decision{current + 1, DecisionCase::forced_right, h, false};
  }
  return argmax_decision(current, h, recency);
}

PoStep standard_po_step(double previous_y, int direction, GridIndex current, double y) {
  if (direction != 1 && direction != -1) throw ParameterError("P&O direction must be +1 or -1");
  const int next_direction = y >= previous_y ? direction : -direction;
  return PoStep{next_direction, current + next_direction};
}

EstimateTriple fill_unmeasured(const EstimateTriple& estimates, double rho, double floor_phi) {
  const auto& [left, mid, right] = estimates;
  if (!mid) throw ContractViolation("center point has no estimate");
  const double prior_variance = rho * rho / floor_phi;
  EstimateTriple out = estimates;
  if (!left) out[0] = Estimate{right ? 2.0 * mid->mean - right->mean : mid->mean, prior_variance};
  if (!right) out[2] = Estimate{left ? 2.0 * mid->mean - left->mean : mid->mean, prior_variance};
  return out;
}

namespace {

void require_all(const EstimateTriple& estimates) {
  for (const auto& e : estimates) {
    if (!e) throw ContractViolation("selector needs estimates for all three candidates (use fill_unmeasured)");
  }
}

void mask(std::array<double, 3>& values, const FeasibleTriple& feasible) {
  for (std::size_t j = 0; j < 3; ++j) {
    if (!feasible[j]) values[j] = -std::numeric_limits<double>::infinity();
  }
}

}  // namespace

Decision hei_select(GridIndex current, const EstimateTriple& estimates, double alpha, const RecencyTriple& recency,
                    const FeasibleTriple& feasible) {
  require_all(estimates);
  const double base = estimates[1]->mean;
  std::array<double, 3> improvement{};
  for (std::size_t j = 0; j < 3; ++j) {
    const double sigma = std::sqrt(estimates[j]->variance);
    const double gain = estimates[j]->mean - base - alpha;
    if (sigma > 0.0) {
      const double z = gain / sigma;
      improvement[j] = gain * normal_cdf(z) + sigma * normal_pdf(z);
    } else {
      improvement[j] = std::max(gain, 0.0);
    }
  }
  mask(improvement, feasible);
  return argmax_decision(current, improvement, recency);
}

Decision thompson_select(GridIndex current, const EstimateTriple& estimates, std::mt19937_64& rng,
                         const RecencyTriple& recency, const FeasibleTriple& feasible) {
  require_all(estimates);
  std::normal_distribution<double> normal;
  std::array<double, 3> samples{};
  for (std::size_t j = 0; j < 3; ++j) {
    samples[j] = estimates[j]->mean + std::sqrt(estimates[j]->variance) * normal(rng);
  }
  mask(samples, feasible);
  return argmax_decision(current, samples, recency);
}

Decision clamp_to_grid(Decision decision, GridIndex current, const InputGrid& grid) {
  if (grid.contains(decision.next)) return decision;
  switch (decision.kind) {
    case DecisionCase::init:
    case DecisionCase::forced_left:
    case DecisionCase::forced_right:
    case DecisionCase::keep_direction:
    case DecisionCase::reverse_direction: {
      const GridIndex other = 2 * current - decision.next;
      decision.next = grid.contains(other) ? other : current;
      break;
    }
    default:
      decision.next = current;
      break;
  }
  decision.clamped = true;
  return decision;
}

BeliefSelector::BeliefSelector(const SelectorConfig& config, const InputGrid& grid, int u1_direction)
    : config_(config), grid_(grid), u1_direction_(u1_direction), belief_(WeightingOperator(config.lambda, config.order)) {
  config_.validate();
  if (u1_direction != 1 && u1_direction != -1) throw ParameterError("u1 direction must be +1 or -1");
}

EstimateTriple BeliefSelector::estimates(GridIndex current) const {
  return {belief_.estimate(current - 1, config_.rho), belief_.estimate(current, config_.rho),
          belief_.estimate(current + 1, config_.rho)};
}

RecencyTriple BeliefSelector::recency(GridIndex current) const {
  return {belief_.last_measured(current - 1), belief_.last_measured(current), belief_.last_measured(current + 1)};
}

FeasibleTriple BeliefSelector::feasible(GridIndex current) const {
  return {grid_.contains(current - 1), grid_.contains(current), grid_.contains(current + 1)};
}

Decision BeliefSelector::step(TimeIndex k, GridIndex current, double y) {
  const bool first = belief_.time() < 0;
  belief_.update(k, current, y);
  Decision d;
  if (first) {
    d = Decision{current + u1_direction_, DecisionCase::init, {}, false};
  } else {
    d = select(k, current);
  }
  return clamp_to_grid(d, current, grid_);
}

Decision UpoSelector::select(TimeIndex, GridIndex current) {
  const EstimateTriple est = estimates(current);
  if (!est[0] && !est[2]) {
    // Both neighbors forgotten: bootstrap again as at k = 0.
    return Decision{current + u1_direction_, DecisionCase::init, {}, false};
  }
  local_ = solve_local(current, est, LocalModelParams{config_.nu, config_.rho});
  return upo_select(current, local_, recency(current), config_.tau);
}

Decision HeiSelector::select(TimeIndex, GridIndex current) {
  const EstimateTriple est = fill_unmeasured(estimates(current), config_.rho, config_.variance_floor_phi);
  return hei_select(current, est, config_.alpha, recency(current), feasible(current));
}

ThompsonSelector::ThompsonSelector(const SelectorConfig& config, const InputGrid& grid, int u1_direction,
                                   std::uint64_t seed)
    : BeliefSelector(config, grid, u1_direction) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x7453u};
  rng_.seed(seq);
}

Decision ThompsonSelector::select(TimeIndex, GridIndex current) {
  const EstimateTriple est = fill_unmeasured(estimates(current), config_.rho, config_.variance_floor_phi);
  return thompson_select(current, est, rng_, recency(current), feasible(current));
}

StandardPoSelector::StandardPoSelector(const InputGrid& grid, int u1_direction)
    : grid_(grid), direction_(u1_direction) {
  if (u1_direction != 1 && u1_direction != -1) throw ParameterError("u1 direction must be +1 or -1");
}

Decision StandardPoSelector::step(TimeIndex k, GridIndex current, double y) {
  Decision d;
  if (k == 0) {
    d = Decision{current + direction_, DecisionCase::init, {}, false};
  } else {
    const PoStep s = standard_po_step(previous_y_, direction_, current, y);
    d = Decision{s.next, s.direction == direction_ ? DecisionCase::keep_direction : DecisionCase::reverse_direction,
                 {}, false};
  }
  previous_y_ = y;
  d = clamp_to_grid(d, current, grid_);
  if (d.next != current) direction_ = d.next > current ? 1 : -1;
  return d;
}

std::unique_ptr<Selector> make_selector(const SelectorConfig& config, const InputGrid& grid, int u1_direction,
                                        std::uint64_t seed) {
  switch (config.kind) {
    case SelectorKind::upo:
      return std::make_unique<UpoSelector>(config, grid, u1_direction);
    case SelectorKind::standard_po:
      return std::make_unique<StandardPoSelector>(grid, u1_direction);
    case SelectorKind::hei:
      return std::make_unique<HeiSelector>(config, grid, u1_direction);
    case SelectorKind::thompson:
      return std::make_unique<ThompsonSelector>(config, grid, u1_direction, seed);
  }
  throw ParameterError("unknown selector kind");
}

ClosedLoop::ClosedLoop(const Objective& objective, std::unique_ptr<Selector> selector, GridIndex u0)
    : objective_(&objective), selector_(std::move(selector)), current_(u0) {
  if (!selector_) throw ParameterError("closed loop needs a selector");
  objective.grid().check(u0);
}

ClosedLoop::Step ClosedLoop::step() {
  Step s;
  s.k = k_;
  s.index = current_;
  s.y = objective_->measure(k_, current_);
  s.decision = selector_->step(k_, current_, s.y);
  current_ = s.decision.next;
  ++k_;
  return s;
}

}  // namespace upo
