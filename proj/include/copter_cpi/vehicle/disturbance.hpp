#pragma once

#include <Eigen/Dense>

#include "copter_cpi/vehicle/dynamics.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::vehicle {

/// Propulsor i delivers (1 - eta_i) of its commanded thrust from onset_time on.
struct FaultConfig {
  Eigen::VectorXd eta;
  double onset_time = 0.0;

  /// Throws when an eta lies outside [0, 1].
  void validate() const;
  bool active(double t) const { return eta.size() > 0 && t >= onset_time; }
  /// eta once active, zeros before (or when eta is empty).
  Eigen::VectorXd eta_at(double t, Eigen::Index propulsors) const;
};

/// Off-nominal conditions acting on the vehicle at one instant.
struct OffNominal {
  Eigen::VectorXd eta;                 ///< empty means healthy
  double payload_mass = 0.0;           ///< kg, acts as a weight force only
  ExternalLoad wind;                   ///< world force, body torque
};

/// Thrust each propulsor actually delivers for a command.
Eigen::VectorXd delivered_thrust(const Eigen::VectorXd& commanded, const Eigen::VectorXd& eta);

/// Total external load: wind plus payload weight.
ExternalLoad external_load(const OffNominal& conditions, const VehicleParams& params);

/// True lumped disturbance of a subsystem for commanded thrusts f.
///   basic:    d_nominal + payload g e1 + B_f Gamma f + [-F_h, -tau_wind]
///   degraded: first three entries of basic
///   lateral:  world x, y components of the external force
Eigen::VectorXd lump_disturbance(Subsystem subsystem, const OffNominal& conditions,
                                 const VehicleParams& params, const Eigen::VectorXd& f);

/// External load that reproduces lump d when the commanded wrench is applied
/// through healthy propulsors. Basic/degraded lumps set the vertical force and
/// body torques (degraded leaves yaw torque zero); lateral lumps set x, y force.
ExternalLoad lump_to_load(Subsystem subsystem, const Eigen::VectorXd& d, const VehicleParams& params);

}  // namespace copter_cpi::vehicle
