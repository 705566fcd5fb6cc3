#pragma once

#include <Eigen/Dense>

#include "copter_cpi/error.hpp"
#include "copter_cpi/vehicle/params.hpp"

namespace copter_cpi::vehicle {

/// Rigid-body state. Position and velocity are world-frame (x north, y east,
/// h altitude up); Euler angles are Z-Y-X (roll, pitch, yaw); body rates in
/// the forward-right-down body frame.
struct RigidState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
  Eigen::Vector3d omega = Eigen::Vector3d::Zero();

  bool finite() const { return p.allFinite() && v.allFinite() && theta.allFinite() && omega.allFinite(); }
};

/// External force (world frame, same axes as RigidState::p) and body torque.
struct ExternalLoad {
  Eigen::Vector3d force = Eigen::Vector3d::Zero();
  Eigen::Vector3d torque = Eigen::Vector3d::Zero();
};

class SimulationDiverged : public Error {
 public:
  using Error::Error;
};

/// Roll or pitch this close to +-pi/2 ends a run as diverged.
inline constexpr double kEulerMargin = 1e-3;

/// Body-to-world rotation for Z-Y-X Euler angles (world axes north-east-down).
Eigen::Matrix3d rotation(const Eigen::Vector3d& theta);

/// Maps body rates to Euler angle rates.
Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& theta);

/// One RK4 step of the rigid body driven by the body wrench [u_t, tau] and an
/// external load, gyroscopic propeller torque neglected. Throws
/// SimulationDiverged on a non-finite result or an Euler singularity.
RigidState step_wrench(const RigidState& state, const Eigen::Vector4d& wrench,
                       const ExternalLoad& load, const VehicleParams& params, double dt);

/// step_wrench with wrench = B_f f, f clipped to [0, K] first.
/// dt must lie in (0, 0.02].
RigidState step_nonlinear(const RigidState& state, const Eigen::VectorXd& thrust,
                          const ExternalLoad& load, const VehicleParams& params, double dt);

}  // namespace copter_cpi::vehicle
