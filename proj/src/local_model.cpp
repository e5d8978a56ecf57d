#include "upo/local_model.hpp"

#include <cmath>
#include <string>

#include "upo/errors.hpp"

namespace upo {

const char* to_string(LocalCase c) {
  switch (c) {
    case LocalCase::right_unmeasured:
      return "right_unmeasured";
    case LocalCase::left_unmeasured:
      return "left_unmeasured";
    case LocalCase::all_measured:
      return "all_measured";
  }
  return "?";
}

void LocalModelParams::validate() const {
  if (!(nu > 0.0)) throw ParameterError("nu must be positive, got " + std::to_string(nu));
  if (!(rho > 0.0)) throw ParameterError("rho must be positive, got " + std::to_string(rho));
}

LocalModel solve_local(GridIndex center, const EstimateTriple& estimates, const LocalModelParams& params) {
  params.validate();
  const auto& [left, mid, right] = estimates;
  if (!mid) throw ContractViolation("local model needs a measured center point");
  if (!left && !right) throw ContractViolation("local model needs at least one measured neighbor");

  LocalModel out;
  out.center = center;
  if (!right) {
    out.kind = LocalCase::right_unmeasured;
    out.h = {left->mean, mid->mean, 2.0 * mid->mean - left->mean};
    return out;
  }
  if (!left) {
    out.kind = LocalCase::left_unmeasured;
    out.h = {2.0 * mid->mean - right->mean, mid->mean, right->mean};
    return out;
  }

  const double scale = params.nu * params.rho * params.nu * params.rho;
  const double wl = left->variance / scale;
  const double wc = mid->variance / scale;
  const double wr = right->variance / scale;
  const double residual = left->mean - 2.0 * mid->mean + right->mean;
  const double factor = residual / (1.0 + wl + 4.0 * wc + wr);
  out.kind = LocalCase::all_measured;
  out.h = {left->mean - factor * wl, mid->mean + 2.0 * factor * wc, right->mean - factor * wr};
  return out;
}

LocalModel solve_local_theta(GridIndex center, const std::array<PointState, 3>& states, const WeightingOperator& op,
                             const LocalModelParams& params) {
  params.validate();
  const double al = op.readout(states[0].xi);
  const double ac = op.readout(states[1].xi);
  const double ar = op.readout(states[2].xi);
  const double pl = op.readout(states[0].phi);
  const double pc = op.readout(states[1].phi);
  const double pr = op.readout(states[2].phi);
  const double nu2 = params.nu * params.nu;

  const double denom = nu2 * pl * pc * pr + pc * pr + 4.0 * pl * pr + pl * pc;
  if (!(denom > 0.0)) throw ContractViolation("local-model denominator is not positive");

  const double theta_l = al * (nu2 * pc * pr + pc + 4.0 * pr) + 2.0 * ac * pr - ar * pc;
  const double theta_c = ac * (nu2 * pl * pr + pl + pr) + 2.0 * al * pr + 2.0 * ar * pl;
  const double theta_r = ar * (nu2 * pl * pc + 4.0 * pl + pc) - al * pc + 2.0 * ac * pl;

  LocalModel out;
  out.center = center;
  out.h = {theta_l / denom, theta_c / denom, theta_r / denom};
  if (pr == 0.0) {
    out.kind = LocalCase::right_unmeasured;
  } else if (pl == 0.0) {
    out.kind = LocalCase::left_unmeasured;
  } else {
    out.kind = LocalCase::all_measured;
  }
  return out;
}

}  // namespace upo
