#pragma once

#include <array>
#include <optional>

#include "upo/belief.hpp"

namespace upo {

enum class LocalCase { right_unmeasured, left_unmeasured, all_measured };

const char* to_string(LocalCase c);

/// Smoothed three-point model around `center`: h = (left, center, right).
struct LocalModel {
  GridIndex center = 0;
  std::array<double, 3> h{};
  LocalCase kind = LocalCase::all_measured;
};

/// nu = delta / rho sets how far the model may bend away from a straight line.
struct LocalModelParams {
  double nu = 3.0;
  double rho = 1.0;

  void validate() const;
};

/// Estimates for (center - 1, center, center + 1); empty = never measured.
using EstimateTriple = std::array<std::optional<Estimate>, 3>;

/// Mean of the three-point model: linear extrapolation through the two measured
/// points when one neighbor is unmeasured; otherwise the estimates shrunk
/// toward collinearity with weights Sigma_j / (nu rho)^2.
///
/// Throws ContractViolation if the center or both neighbors are unmeasured.
LocalModel solve_local(GridIndex center, const EstimateTriple& estimates, const LocalModelParams& params);

/// Same model solved through the closed-form numerator/denominator expressions
/// in the raw recursion vectors. Used to cross-check solve_local.
///
/// Throws ContractViolation when the local-model denominator is not positive.
LocalModel solve_local_theta(GridIndex center, const std::array<PointState, 3>& states,
                             const WeightingOperator& op, const LocalModelParams& params);

}  // namespace upo
