#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "upo/grid.hpp"
#include "upo/objective.hpp"
#include "upo/pv_plant.hpp"
#include "upo/selectors.hpp"

namespace upo {

/// Which objective a run uses, with the parameters of the synthetic families.
struct ObjectiveSpec {
  std::string kind = "pv-day";  ///< pv-day | parabola | drifting-parabola | oscillating-parabola
  double curvature = 1.0;
  double center = 0.0;
  double rate = 0.0;         ///< drifting-parabola center speed per step
  double offset_rate = 0.0;  ///< drifting-parabola vertical shift per step
  double amplitude = 0.0;    ///< oscillating-parabola
  double period = 100.0;     ///< oscillating-parabola
  pv::PvParams pv;
  pv::DayProfile profile;
};

struct ExperimentConfig {
  ObjectiveSpec objective;
  NoiseKind noise_kind = NoiseKind::gaussian;
  double rho = 5.0;

  double grid_spacing = 0.05;
  std::optional<IndexInterval> grid_bounds = IndexInterval{1, 19};
  /// Interval scanned by the maximizer oracle; defaults to the grid bounds.
  std::optional<IndexInterval> oracle_interval;

  std::vector<SelectorConfig> selectors;
  TimeIndex horizon = 300;
  std::optional<GridIndex> u0;  ///< defaults to the grid midpoint
  int u1_direction = 1;
  std::uint64_t seed = 1;
  std::string output = "out";

  /// Defaults reproduce the PV case study with upo and standard P&O.
  static ExperimentConfig defaults();

  InputGrid grid() const;
  GridIndex start_index() const;
  IndexInterval scan_interval() const;
  /// Throws ConfigError on any inconsistency.
  void validate(const std::string& source = "<config>") const;
};

/// Parse the flat `section.key = value` format ('#' starts a comment).
/// Keys absent from the text keep their defaults().
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<config>");
ExperimentConfig load_config(const std::string& path);

/// Serialize every key, so that parse_config(write_config(c)) == c.
void write_config(std::ostream& out, const ExperimentConfig& config);

/// Build the objective described by the config (noise seeded by config.seed).
Objective build_objective(const ExperimentConfig& config);

}  // namespace upo
