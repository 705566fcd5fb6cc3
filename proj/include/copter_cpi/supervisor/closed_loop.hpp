#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "copter_cpi/control/controller.hpp"
#include "copter_cpi/supervisor/pipeline.hpp"
#include "copter_cpi/supervisor/supervisor.hpp"
#include "copter_cpi/vehicle/disturbance.hpp"

namespace copter_cpi::supervisor {

/// Payload mass attached from `time` on (replaces any earlier payload).
struct PayloadEvent {
  double time = 0.0;
  double mass = 0.0;
};

/// Wind load applied from `time` on (replaces any earlier wind).
struct WindEvent {
  double time = 0.0;
  vehicle::ExternalLoad load;
};

struct Scenario {
  std::string name;
  vehicle::VehicleParams vehicle;
  control::ControllerGains gains;
  control::DegradedAllocation degraded_allocation = control::DegradedAllocation::kHealthy;
  PipelineConfig pipeline;
  vehicle::FaultConfig fault;
  std::vector<PayloadEvent> payload;
  std::vector<WindEvent> wind;
  control::Reference reference;
  double duration = 30.0;
  double physics_dt = 0.002;
  std::uint64_t seed = 0;
  int debounce = 5;
  /// Run without the supervisor, pinned to one mode.
  std::optional<Mode> fixed_mode;

  /// Throws copter_cpi::Error on inconsistent settings.
  void validate() const;
  /// Conditions in force at time t.
  vehicle::OffNominal conditions(double t) const;
};

struct TraceRow {
  double time = 0.0;
  vehicle::RigidState state;
  Measurement measurement;
  Eigen::VectorXd thrust;  ///< command held over the interval ending at `time`
  perf::SubsystemEstimates estimates;  ///< as reported to the supervisor
  perf::CpiReport report;
  Mode mode = Mode::kM1;
  bool loc_imminent = false;
};

struct Trace {
  std::vector<TraceRow> rows;
  std::vector<Transition> transitions;
  bool diverged = false;
  std::optional<double> diverged_at;
};

struct TraceSummary {
  Mode final_mode = Mode::kM1;
  double min_S_l = 0.0, min_S_b = 0.0, min_S_d = 0.0;
  std::vector<Transition> transitions;
  bool diverged = false;
  std::optional<double> diverged_at;
};

TraceSummary summarize(const Trace& trace);

/// Closed loop at the control period: measure, estimate, assess, pick a mode,
/// control with the true state, then integrate the rigid body over the period.
Trace run_closed_loop(const Scenario& scenario);

}  // namespace copter_cpi::supervisor
