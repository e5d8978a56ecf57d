#include "upo/pv_plant.hpp"

#include <cmath>
#include <cstring>
#include <limits>
#include <mutex>
#include <numbers>
#include <string>
#include <unordered_map>

#include "upo/errors.hpp"

namespace upo::pv {

void PvParams::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"T_r", T_r}, {"I_s", I_s}, {"I_0", I_0}, {"k_i", k_i}, {"N", N},     {"E_g", E_g}, {"k_B", k_B},
      {"q_e", q_e}, {"n_s", n_s}, {"R_s", R_s}, {"R_p", R_p}, {"C_c", C_c}, {"L_c", L_c}, {"R_c", R_c}};
  for (const auto& [name, value] : fields) {
    if (!(value > 0.0) || !std::isfinite(value)) {
      throw ParameterError(std::string("pv parameter ") + name + " must be positive and finite");
    }
  }
}

void DayProfile::validate() const {
  if (horizon <= 0) throw ParameterError("day profile horizon must be positive");
  if (!(S_peak >= 0.0)) throw ParameterError("day profile S_peak must be nonnegative");
  if (!(T_base > 0.0) || !(T_base + std::min(T_rise, 0.0) > 0.0)) {
    throw ParameterError("day profile temperature must stay positive");
  }
  if (!(S_exponent > 0.0) || !(T_exponent > 0.0)) throw ParameterError("day profile exponents must be positive");
}

Conditions DayProfile::at(TimeIndex k) const {
  const double phase = std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(horizon));
  // Outside [0, horizon] it is night.
  const double bell = phase > 0.0 ? phase : 0.0;
  return Conditions{T_base + T_rise * std::pow(bell, T_exponent), S_peak * std::pow(bell, S_exponent)};
}

namespace {

void check_conditions(const Conditions& c) {
  if (!(c.T > 0.0)) throw ParameterError("temperature must be positive");
  if (!(c.S >= 0.0)) throw ParameterError("irradiance must be nonnegative");
}

}  // namespace

double thermal_voltage(const PvParams& p, double T) { return p.k_B * T / p.q_e; }

double light_current(const PvParams& p, const Conditions& c) {
  check_conditions(c);
  return (p.I_s + p.k_i * (c.T - p.T_r)) * c.S / 1000.0;
}

double saturation_current(const PvParams& p, const Conditions& c) {
  check_conditions(c);
  const double ratio = c.T / p.T_r;
  // E_g is in eV, so E_g / V_t with V_t in volts is already dimensionless.
  return p.I_0 * ratio * ratio * ratio * std::exp(p.E_g / (p.N * thermal_voltage(p, c.T)) * (ratio - 1.0));
}

namespace {

struct Diode {
  double i_s;
  double i_0;
  double scale;   // N V_t n_s
  double series;  // R_s n_s
  double shunt;   // R_p n_s

  Diode(const PvParams& p, const Conditions& c)
      : i_s(light_current(p, c)),
        i_0(saturation_current(p, c)),
        scale(p.N * thermal_voltage(p, c.T) * p.n_s),
        series(p.R_s * p.n_s),
        shunt(p.R_p * p.n_s) {}

  // F(i) = i - rhs(i); strictly increasing in i. Returns F and dF/di.
  std::pair<double, double> residual(double v, double i) const {
    const double drop = v + i * series;
    const double arg = drop / scale;
    if (arg > 700.0) return {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const double e = std::exp(arg);
    const double f = i - i_s + i_0 * (e - 1.0) + drop / shunt;
    const double df = 1.0 + i_0 * e * series / scale + series / shunt;
    return {f, df};
  }

  double current(double v) const {
    // F(-v/series) = -v/series - i_s <= 0 and F(i_s) >= 0 for v >= 0.
    double lo = -v / series;
    double hi = i_s;
    double x = hi;
    for (int iter = 0; iter < 200; ++iter) {
      const auto [f, df] = residual(v, x);
      if (f == 0.0) return x;
      if (f > 0.0) {
        hi = x;
      } else {
        lo = x;
      }
      double next = std::isfinite(f) ? x - f / df : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - x) <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) {
        return next;
      }
      x = next;
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(x))) return x;
    }
    throw NumericFailure("array current did not converge at v = " + std::to_string(v));
  }

  double open_circuit() const {
    if (i_s <= 0.0) return 0.0;
    // With i = 0 the diode equation is explicit in v and increasing.
    auto g = [&](double v) { return i_0 * std::expm1(v / scale) + v / shunt - i_s; };
    double lo = 0.0;
    double hi = scale * std::log1p(i_s / i_0);
    for (int iter = 0; iter < 200 && hi - lo > 4.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (g(mid) > 0.0) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
};

}  // namespace

double array_current(const PvParams& p, const Conditions& c, double v) {
  if (!(v >= 0.0)) throw ParameterError("array voltage must be nonnegative");
  return Diode(p, c).current(v);
}

double open_circuit_voltage(const PvParams& p, const Conditions& c) { return Diode(p, c).open_circuit(); }

SteadyState steady_state_power(const PvParams& p, const Conditions& c, double u) {
  if (!(u >= 0.0 && u <= 1.0)) throw ParameterError("duty cycle must lie in [0, 1]");
  const Diode diode(p, c);
  const double v_oc = diode.open_circuit();
  if (u == 0.0 || v_oc == 0.0) return SteadyState{0.0, v_oc, 0.0};
  const double load = u * u / p.R_c;
  // g(v) = i(v) - v u^2 / R_c: g(0) > 0, g(v_oc) < 0, decreasing.
  double lo = 0.0;
  double hi = v_oc;
  for (int iter = 0; iter < 200 && hi - lo > 2.0 * std::numeric_limits<double>::epsilon() * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (diode.current(mid) - mid * load > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double v = 0.5 * (lo + hi);
  const double i = diode.current(v);
  return SteadyState{v * i, v, i};
}

Objective day_objective(const PvParams& params, const DayProfile& profile, const InputGrid& grid, NoiseModel noise,
                        bool cache) {
  params.validate();
  profile.validate();
  auto power = [params, profile](TimeIndex k, double u) {
    return steady_state_power(params, profile.at(k), u).power;
  };
  if (!cache) return Objective(grid, power, noise);

  struct Cache {
    std::mutex mutex;
    std::unordered_map<std::uint64_t, std::unordered_map<std::uint64_t, double>> values;
  };
  auto shared = std::make_shared<Cache>();
  auto cached = [power, shared](TimeIndex k, double u) {
    std::uint64_t bits;
    std::memcpy(&bits, &u, sizeof bits);
    const auto key = static_cast<std::uint64_t>(k);
    {
      std::lock_guard lock(shared->mutex);
      auto row = shared->values.find(key);
      if (row != shared->values.end()) {
        auto hit = row->second.find(bits);
        if (hit != row->second.end()) return hit->second;
      }
    }
    const double value = power(k, u);
    std::lock_guard lock(shared->mutex);
    shared->values[key][bits] = value;
    return value;
  };
  return Objective(grid, cached, noise);
}

}  // namespace upo::pv
