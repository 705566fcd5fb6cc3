#pragma once

#include <optional>
#include <string>

#include "copter_cpi/cli/json_source.hpp"
#include "copter_cpi/supervisor/closed_loop.hpp"
#include "copter_cpi/threshold/sweep.hpp"
#include "copter_cpi/vehicle/params.hpp"

namespace copter_cpi::cli {

/// Vehicle file: an object with m_a, J, g, n_P, arm_length, torque_coeff,
/// spin_dirs, azimuths (rad), K (number or per-propulsor list), phi_max,
/// theta_max and an optional name. Unknown keys are rejected.
vehicle::VehicleParams vehicle_from_json(const JsonSource& src, const std::string& pointer = "");
vehicle::VehicleParams load_vehicle(const std::string& path);

struct SweepConfig {
  vehicle::Subsystem family = vehicle::Subsystem::kBasic;
  int nd = 5;
  double delta_sigma = 0.1;
  bool judge_uncontrollable = false;
  std::optional<threshold::GridBounds> bounds;  ///< default_bounds() when absent
  threshold::JudgeConfig judge;
  /// Replace simulation with "stable iff sigma >= value".
  std::optional<double> synthetic_threshold;
};

struct ScenarioConfig {
  supervisor::Scenario scenario;
  std::string vehicle_path;
  SweepConfig sweep;
  /// Trace file name under the output directory.
  std::string trace_file;
};

/// Scenario file; the vehicle path is resolved against the scenario's
/// directory. Event times must fall within the duration.
ScenarioConfig scenario_from_json(const JsonSource& src);
ScenarioConfig load_scenario(const std::string& path);

vehicle::Subsystem parse_subsystem(const std::string& text);

}  // namespace copter_cpi::cli
