#pragma once

#include <Eigen/Dense>

#include <string>

namespace copter_cpi::vehicle {

/// Multicopter with n_P planar propulsors. Propulsor i sits at azimuth
/// azimuths[i] (body frame, x forward, y right), arm_length from the center.
struct VehicleParams {
  std::string name;
  double mass = 0.0;              ///< m_a, kg
  Eigen::Vector3d inertia{0, 0, 0};  ///< J_x, J_y, J_z, kg m^2
  double gravity = 9.81;          ///< m/s^2
  double arm_length = 0.0;        ///< m
  double torque_coeff = 0.0;      ///< yaw torque per unit thrust, N m / N
  Eigen::VectorXd spin_dirs;      ///< +1 or -1 per propulsor
  Eigen::VectorXd azimuths;       ///< rad
  Eigen::VectorXd max_thrust;     ///< K_i, N
  double phi_max = 0.0;           ///< rad
  double theta_max = 0.0;         ///< rad

  Eigen::Index propulsor_count() const { return max_thrust.size(); }
  double weight() const { return mass * gravity; }

  /// Throws copter_cpi::Error naming the first violated invariant.
  void validate() const;
};

/// Symmetric hexacopter, 60 degree spacing, alternating spin.
VehicleParams default_hexacopter();

/// Quadrotor in X layout.
VehicleParams default_quad();

/// B_f, 4 x n_P: total thrust, roll, pitch and yaw torque per unit thrust.
Eigen::MatrixXd effectiveness_matrix(const VehicleParams& params);

/// B_f (I - Gamma), Gamma = diag(eta).
Eigen::MatrixXd faulted_effectiveness(const VehicleParams& params, const Eigen::VectorXd& eta);

}  // namespace copter_cpi::vehicle
