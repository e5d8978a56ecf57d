#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <string_view>

#include "upo/belief.hpp"
#include "upo/local_model.hpp"
#include "upo/objective.hpp"

namespace upo {

enum class SelectorKind { upo, standard_po, hei, thompson };

const char* to_string(SelectorKind kind);
/// Accepts "upo", "standard_po" (also "po"), "hei", "thompson". Throws ParameterError.
SelectorKind parse_selector_kind(std::string_view name);

/// Hyperparameters of one selector. Fields not used by a kind are ignored.
struct SelectorConfig {
  SelectorKind kind = SelectorKind::upo;
  double tau = 2.0;     ///< forced-perturbation margin (upo), objective units
  double nu = 3.0;      ///< local-model bend allowance (upo)
  double alpha = 1e-4;  ///< improvement offset (hei)
  double lambda = 0.6065306597126334;  ///< forgetting factor, e^-0.5
  int order = 1;                       ///< weight order M
  double rho = 5.0;                    ///< noise scale assumed by the belief model
  double variance_floor_phi = 1e-6;    ///< unmeasured-neighbor weight (hei, thompson)

  /// Defaults per kind: upo (lambda e^-0.5, M 1, nu 3); hei/thompson (lambda 0.95, M 0).
  static SelectorConfig defaults(SelectorKind kind);
  void validate() const;
};

enum class DecisionCase {
  init,            ///< bootstrap step u_1 = u_0 +- 1
  forced_left,     ///< upo: perturb to the least recently measured left neighbor
  forced_right,    ///< upo: perturb to the least recently measured right neighbor
  argmax_stay,
  argmax_left,
  argmax_right,
  keep_direction,     ///< standard P&O
  reverse_direction,  ///< standard P&O
};

const char* to_string(DecisionCase c);

struct Decision {
  GridIndex next = 0;
  DecisionCase kind = DecisionCase::init;
  /// Values the choice was made on: h (upo), expected improvement (hei),
  /// samples (thompson), zeros otherwise. Order (left, center, right).
  std::array<double, 3> values{};
  bool clamped = false;  ///< moved by the grid bounds
};

/// Last measured times of (center - 1, center, center + 1), -1 if never.
using RecencyTriple = std::array<TimeIndex, 3>;

/// Argmax over (left, center, right). Ties prefer the center, then the less
/// recently measured neighbor, then the left one.
int argmax_with_ties(const std::array<double, 3>& values, const RecencyTriple& recency);

/// Uncertainty-based input selection from a solved local model.
Decision upo_select(GridIndex current, const LocalModel& local, const RecencyTriple& recency, double tau);

struct PoStep {
  int direction = 1;  ///< g_{k+1}
  GridIndex next = 0;
};

/// Standard perturb and observe: keep the direction when y_k >= y_{k-1}, else reverse.
PoStep standard_po_step(double previous_y, int direction, GridIndex current, double y);

/// Replace unmeasured neighbors by the extrapolation 2 mu_c - mu_other with
/// variance rho^2 / floor_phi. Throws ContractViolation if the center is unmeasured.
EstimateTriple fill_unmeasured(const EstimateTriple& estimates, double rho, double floor_phi);

/// Which of (left, center, right) may be chosen. Infeasible candidates score -inf.
using FeasibleTriple = std::array<bool, 3>;

/// Expected improvement over the current point's mean (minus alpha); argmax with ties.
Decision hei_select(GridIndex current, const EstimateTriple& estimates, double alpha,
                    const RecencyTriple& recency = {0, 0, 0}, const FeasibleTriple& feasible = {true, true, true});

/// One normal sample per candidate; picks the largest.
Decision thompson_select(GridIndex current, const EstimateTriple& estimates, std::mt19937_64& rng,
                         const RecencyTriple& recency = {0, 0, 0},
                         const FeasibleTriple& feasible = {true, true, true});

/// Pull a decision back inside the grid: forced/P&O moves flip to the other
/// neighbor, argmax moves stay at the boundary point.
Decision clamp_to_grid(Decision decision, GridIndex current, const InputGrid& grid);

/// Closed-loop input selector. `step` consumes the measurement y_k taken at
/// `current` and returns the input index for k + 1.
class Selector {
 public:
  virtual ~Selector() = default;

  virtual SelectorKind kind() const = 0;
  virtual Decision step(TimeIndex k, GridIndex current, double y) = 0;
};

/// Belief-model selectors expose their state for inspection and snapshots.
class BeliefSelector : public Selector {
 public:
  BeliefSelector(const SelectorConfig& config, const InputGrid& grid, int u1_direction);

  const BeliefState& belief() const { return belief_; }
  const SelectorConfig& config() const { return config_; }
  EstimateTriple estimates(GridIndex current) const;
  RecencyTriple recency(GridIndex current) const;
  FeasibleTriple feasible(GridIndex current) const;

  Decision step(TimeIndex k, GridIndex current, double y) final;

 protected:
  /// Called for k >= 1 after the belief has absorbed y_k.
  virtual Decision select(TimeIndex k, GridIndex current) = 0;

  SelectorConfig config_;
  InputGrid grid_;
  int u1_direction_;
  BeliefState belief_;
};

class UpoSelector final : public BeliefSelector {
 public:
  using BeliefSelector::BeliefSelector;
  SelectorKind kind() const override { return SelectorKind::upo; }

  /// Local model the last decision was based on.
  const LocalModel& last_local_model() const { return local_; }

 protected:
  Decision select(TimeIndex k, GridIndex current) override;

 private:
  LocalModel local_;
};

class HeiSelector final : public BeliefSelector {
 public:
  using BeliefSelector::BeliefSelector;
  SelectorKind kind() const override { return SelectorKind::hei; }

 protected:
  Decision select(TimeIndex k, GridIndex current) override;
};

class ThompsonSelector final : public BeliefSelector {
 public:
  ThompsonSelector(const SelectorConfig& config, const InputGrid& grid, int u1_direction, std::uint64_t seed);
  SelectorKind kind() const override { return SelectorKind::thompson; }

 protected:
  Decision select(TimeIndex k, GridIndex current) override;

 private:
  std::mt19937_64 rng_;
};

class StandardPoSelector final : public Selector {
 public:
  StandardPoSelector(const InputGrid& grid, int u1_direction);
  SelectorKind kind() const override { return SelectorKind::standard_po; }
  Decision step(TimeIndex k, GridIndex current, double y) override;

 private:
  InputGrid grid_;
  int direction_;
  double previous_y_ = 0.0;
};

/// `seed` only matters for stochastic selectors.
std::unique_ptr<Selector> make_selector(const SelectorConfig& config, const InputGrid& grid, int u1_direction,
                                        std::uint64_t seed);

/// Drives a selector against an objective: measure, select, move.
class ClosedLoop {
 public:
  ClosedLoop(const Objective& objective, std::unique_ptr<Selector> selector, GridIndex u0);

  struct Step {
    TimeIndex k = 0;
    GridIndex index = 0;
    double y = 0.0;
    Decision decision;
  };

  /// Measures y_k at the current input and decides the next one.
  Step step();

  TimeIndex time() const { return k_; }
  GridIndex current() const { return current_; }
  const Selector& selector() const { return *selector_; }

 private:
  const Objective* objective_;
  std::unique_ptr<Selector> selector_;
  GridIndex current_;
  TimeIndex k_ = 0;
};

}  // namespace upo
