#pragma once

#include <Eigen/Dense>

#include <optional>

#include "copter_cpi/control/allocation.hpp"
#include "copter_cpi/control/pid.hpp"
#include "copter_cpi/vehicle/dynamics.hpp"
#include "copter_cpi/vehicle/params.hpp"

namespace copter_cpi::control {

/// Outer loops produce accelerations (m/s^2), attitude loops angular
/// accelerations (rad/s^2) that are scaled by the inertia.
struct ControllerGains {
  PidGains lateral{1.0, 0.1, 1.4, -5.0, 5.0};
  PidGains altitude{4.0, 1.0, 2.8, -8.0, 8.0};
  PidGains roll{64.0, 40.0, 11.0, -200.0, 200.0};
  PidGains pitch{64.0, 40.0, 11.0, -200.0, 200.0};
  PidGains yaw{16.0, 4.0, 8.0, -50.0, 50.0};
  /// Degraded thrust-axis loop; the integrator lives in body axes and leaks
  /// at tilt_leak (1/s) so the loop stays stable at any spin rate.
  PidGains tilt{100.0, 40.0, 16.0, -200.0, 200.0};
  double tilt_leak = 0.3;

  void validate() const;
};

/// Which propulsors the degraded allocation may use.
enum class DegradedAllocation {
  kAll,      ///< every propulsor, no fault knowledge
  kHealthy,  ///< failed propulsors (eta = 1) excluded once degraded control engages
};

struct Reference {
  Eigen::Vector3d position = Eigen::Vector3d(0.0, 0.0, 1.0);  ///< x, y, h
  double psi = 0.0;
};

struct ControlCommand {
  double u_t = 0.0;
  Eigen::Vector3d u_tau = Eigen::Vector3d::Zero();
  Eigen::VectorXd f;
  /// Wrench [u_t, tau] produced by f through the nominal B_f.
  Eigen::Vector4d achieved = Eigen::Vector4d::Zero();
  /// Roll and pitch references handed to the attitude loop.
  Eigen::Vector2d tilt_ref = Eigen::Vector2d::Zero();
  bool saturated = false;
};

/// Cascaded PID: lateral position -> (phi_c, theta_c), altitude -> u_t,
/// attitude -> u_tau, then allocation onto the propulsors.
///
/// Degraded operation drops the yaw loop and may spin freely. The thrust axis
/// is steered in world axes through an exact inversion of its second
/// derivative in terms of the body rates; constant body-fixed torques are
/// removed by a body-axis integrator. The yaw torque row is left out of the
/// allocation.
class FlightController {
 public:
  FlightController(const vehicle::VehicleParams& params, const ControllerGains& gains,
                   DegradedAllocation degraded_allocation = DegradedAllocation::kHealthy);

  /// Propulsor health used by DegradedAllocation::kHealthy. Throws
  /// Error("unrecoverable configuration") when the remaining propulsors
  /// cannot produce thrust, roll and pitch independently.
  void set_failed(const Eigen::VectorXd& eta);

  ControlCommand update(const vehicle::RigidState& state, const Reference& ref, bool lateral_enabled,
                        bool degraded, double dt);

  void reset();

  const vehicle::VehicleParams& params() const { return params_; }

 private:
  Eigen::Vector2d lateral_tilt(const vehicle::RigidState& state, const Reference& ref, double dt);
  double thrust(const vehicle::RigidState& state, const Reference& ref, double dt);

  vehicle::VehicleParams params_;
  ControllerGains gains_;
  DegradedAllocation degraded_allocation_;
  Eigen::MatrixXd bf_;
  Allocator nominal_;
  Allocator degraded_;
  std::optional<Eigen::VectorXd> healthy_;  ///< 1 for usable propulsors
  Eigen::Vector3d degraded_torque(const vehicle::RigidState& state, const Eigen::Vector2d& tilt_ref, double dt);

  Pid lateral_x_, lateral_y_, altitude_, roll_, pitch_, yaw_;
  Eigen::Vector2d tilt_integral_ = Eigen::Vector2d::Zero();
};

/// One nominal control update (lateral loop enabled).
ControlCommand nominal_control(FlightController& controller, const vehicle::RigidState& state,
                               const Reference& ref, double dt);

/// One degraded control update: altitude, roll and pitch only.
ControlCommand degraded_control(FlightController& controller, const vehicle::RigidState& state,
                                const Reference& ref, double dt);

}  // namespace copter_cpi::control
