#pragma once

#include <Eigen/Dense>

#include <optional>

#include "copter_cpi/control/controller.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::threshold {

struct JudgeConfig {
  double horizon = 20.0;
  double tail_fraction = 0.25;
  double altitude_tol = 0.5;
  double angle_tol = 0.2;
  double lateral_tol = 0.5;
  double control_dt = 0.01;
  double physics_dt = 0.002;
  double h_ref = 1.0;

  void validate() const;
};

struct StabilityJudgment {
  bool stable = false;
  /// Largest tracking error over the tail, each channel divided by its
  /// tolerance; infinite after divergence.
  double max_error_tail = 0.0;
  std::optional<double> diverged_at;
};

/// Nonlinear closed loop from hover with lump d held constant from t = 0.
///   basic:    nominal control, lateral loop off; checks h, phi, theta, psi
///   degraded: degraded control, lateral loop off; checks h, phi, theta
///   lateral:  nominal control with the lateral loop; also checks x, y
/// Stable iff nothing diverged and every checked error stays below its
/// tolerance over the last tail_fraction of the horizon.
StabilityJudgment stability_judge(vehicle::Subsystem family, const Eigen::VectorXd& d,
                                  const vehicle::VehicleParams& params, const control::ControllerGains& gains,
                                  const JudgeConfig& config = {});

}  // namespace copter_cpi::threshold
