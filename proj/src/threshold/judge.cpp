#include "copter_cpi/threshold/judge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "copter_cpi/error.hpp"
#include "copter_cpi/vehicle/disturbance.hpp"

namespace copter_cpi::threshold {

void JudgeConfig::validate() const {
  if (!(horizon > 0.0)) {
    throw Error("judge: horizon must be positive");
  }
  if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
    throw Error("judge: tail_fraction must lie in (0, 1]");
  }
  if (!(altitude_tol > 0.0 && angle_tol > 0.0 && lateral_tol > 0.0)) {
    throw Error("judge: tolerances must be positive");
  }
  if (!(physics_dt > 0.0 && control_dt >= physics_dt)) {
    throw Error("judge: time steps must be positive with control_dt >= physics_dt");
  }
}

StabilityJudgment stability_judge(vehicle::Subsystem family, const Eigen::VectorXd& d,
                                  const vehicle::VehicleParams& params, const control::ControllerGains& gains,
                                  const JudgeConfig& config) {
  config.validate();
  const vehicle::ExternalLoad load = vehicle::lump_to_load(family, d, params);
  const bool lateral = family == vehicle::Subsystem::kLateral;
  const bool degraded = family == vehicle::Subsystem::kDegraded;

  control::FlightController controller(params, gains);
  control::Reference ref;
  ref.position = Eigen::Vector3d(0.0, 0.0, config.h_ref);

  vehicle::RigidState state;
  state.p = ref.position;

  const int ticks = static_cast<int>(std::lround(config.horizon / config.control_dt));
  const int substeps = std::max(1, static_cast<int>(std::lround(config.control_dt / config.physics_dt)));
  const double h = config.control_dt / substeps;
  const int tail_start = ticks - static_cast<int>(std::lround(config.tail_fraction * ticks));

  StabilityJudgment result;
  double worst = 0.0;
  for (int k = 0; k < ticks; ++k) {
    const control::ControlCommand cmd = controller.update(state, ref, lateral, degraded, config.control_dt);
    try {
      for (int s = 0; s < substeps; ++s) {
        state = vehicle::step_nonlinear(state, cmd.f, load, params, h);
      }
    } catch (const vehicle::SimulationDiverged&) {
      result.stable = false;
      result.max_error_tail = std::numeric_limits<double>::infinity();
      result.diverged_at = (k + 1) * config.control_dt;
      return result;
    }
    if (k + 1 <= tail_start) {
      continue;
    }
    double e = std::abs(state.p.z() - ref.position.z()) / config.altitude_tol;
    e = std::max(e, std::abs(state.theta.x() - cmd.tilt_ref.x()) / config.angle_tol);
    e = std::max(e, std::abs(state.theta.y() - cmd.tilt_ref.y()) / config.angle_tol);
    if (!degraded) {
      const double yaw = std::remainder(state.theta.z() - ref.psi, 2.0 * std::numbers::pi);
      e = std::max(e, std::abs(yaw) / config.angle_tol);
    }
    if (lateral) {
      e = std::max(e, std::abs(state.p.x() - ref.position.x()) / config.lateral_tol);
      e = std::max(e, std::abs(state.p.y() - ref.position.y()) / config.lateral_tol);
    }
    worst = std::max(worst, e);
  }
  result.max_error_tail = worst;
  result.stable = worst < 1.0;
  return result;
}

}  // namespace copter_cpi::threshold
