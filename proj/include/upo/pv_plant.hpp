#pragma once

#include <memory>

#include "upo/objective.hpp"

namespace upo::pv {

/// Single-diode photovoltaic array and buck converter parameters.
/// Defaults are a 72-cell silicon module driving a 2 ohm load.
struct PvParams {
  double T_r = 298.15;     ///< reference temperature [K]
  double I_s = 5.61;       ///< short-circuit current at T_r [A]
  double I_0 = 1.13e-6;    ///< reverse saturation current at T_r [A]
  double k_i = 1.96e-3;    ///< short-circuit current temperature coefficient [A/K]
  double N = 1.81;         ///< ideality factor
  double E_g = 1.16;       ///< band gap [eV]
  double k_B = 1.38e-23;   ///< Boltzmann constant [J/K]
  double q_e = 1.60e-19;   ///< electron charge [C]
  double n_s = 72;         ///< cells in series
  double R_s = 2.83e-3;    ///< series resistance [ohm]
  double R_p = 8.7;        ///< parallel resistance [ohm]
  double C_c = 1e-3;       ///< converter capacitance [F]
  double L_c = 5e-3;       ///< converter inductance [H]
  double R_c = 2.0;        ///< converter load resistance [ohm]

  void validate() const;
};

struct Conditions {
  double T = 298.15;   ///< cell temperature [K]
  double S = 1000.0;   ///< irradiance [W/m^2]
};

/// Clear-day temperature and irradiance: bell curves sin(pi k / horizon)^p.
struct DayProfile {
  TimeIndex horizon = 300;
  double S_peak = 1000.0;
  double T_base = 293.15;
  double T_rise = 20.0;
  double S_exponent = 1.5;
  double T_exponent = 1.5;

  Conditions at(TimeIndex k) const;
  void validate() const;
};

double thermal_voltage(const PvParams& p, double T);

/// Light-generated current i_s [A].
double light_current(const PvParams& p, const Conditions& c);

/// Reverse saturation current i_0 [A].
double saturation_current(const PvParams& p, const Conditions& c);

/// Array output current at terminal voltage v >= 0: root of the implicit
/// single-diode equation, found by bracketed Newton iteration.
double array_current(const PvParams& p, const Conditions& c, double v);

/// Voltage at which the array current vanishes (0 when there is no light).
double open_circuit_voltage(const PvParams& p, const Conditions& c);

struct SteadyState {
  double power = 0.0;    ///< v * i [W]
  double voltage = 0.0;  ///< [V]
  double current = 0.0;  ///< array current [A]
};

/// Equilibrium of the converter at duty cycle u in [0, 1]: the array current
/// equals v u^2 / R_c and the inductor current is v u / R_c.
SteadyState steady_state_power(const PvParams& p, const Conditions& c, double u);

/// Produced power as a time-varying objective over the duty-cycle grid. Truth
/// values are memoized per (k, grid index) in a cache shared by copies.
Objective day_objective(const PvParams& params, const DayProfile& profile, const InputGrid& grid,
                        NoiseModel noise, bool cache = true);

}  // namespace upo::pv
