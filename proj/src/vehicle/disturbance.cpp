#include "copter_cpi/vehicle/disturbance.hpp"

#include <cmath>

#include "copter_cpi/error.hpp"

namespace copter_cpi::vehicle {

void FaultConfig::validate() const {
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (!(eta(i) >= 0.0 && eta(i) <= 1.0)) {
      throw Error("fault: eta[" + std::to_string(i) + "] must lie in [0, 1]");
    }
  }
  if (!std::isfinite(onset_time) || onset_time < 0.0) {
    throw Error("fault: onset_time must be finite and non-negative");
  }
}

Eigen::VectorXd FaultConfig::eta_at(double t, Eigen::Index propulsors) const {
  if (!active(t)) {
    return Eigen::VectorXd::Zero(propulsors);
  }
  if (eta.size() != propulsors) {
    throw Error("fault: eta has " + std::to_string(eta.size()) + " entries, vehicle has " +
                std::to_string(propulsors) + " propulsors");
  }
  return eta;
}

Eigen::VectorXd delivered_thrust(const Eigen::VectorXd& commanded, const Eigen::VectorXd& eta) {
  if (eta.size() == 0) {
    return commanded;
  }
  if (eta.size() != commanded.size()) {
    throw Error("delivered_thrust: eta has wrong length");
  }
  return commanded.cwiseProduct(Eigen::VectorXd::Ones(eta.size()) - eta);
}

ExternalLoad external_load(const OffNominal& conditions, const VehicleParams& params) {
  ExternalLoad load = conditions.wind;
  load.force.z() -= conditions.payload_mass * params.gravity;
  return load;
}

Eigen::VectorXd lump_disturbance(Subsystem subsystem, const OffNominal& conditions, const VehicleParams& params,
                                 const Eigen::VectorXd& f) {
  if (subsystem == Subsystem::kLateral) {
    return Eigen::Vector2d(conditions.wind.force.x(), conditions.wind.force.y());
  }
  const Eigen::MatrixXd bf = effectiveness_matrix(params);
  if (f.size() != bf.cols()) {
    throw Error("lump_disturbance: thrust vector has wrong length");
  }
  Eigen::VectorXd d = Eigen::VectorXd::Zero(4);
  d(0) = params.weight() + conditions.payload_mass * params.gravity - conditions.wind.force.z();
  d.tail<3>() = -conditions.wind.torque;
  if (conditions.eta.size() > 0) {
    d += bf * (f - delivered_thrust(f, conditions.eta));
  }
  if (subsystem == Subsystem::kDegraded) {
    return d.head(3);
  }
  return d;
}

ExternalLoad lump_to_load(Subsystem subsystem, const Eigen::VectorXd& d, const VehicleParams& params) {
  ExternalLoad load;
  switch (subsystem) {
    case Subsystem::kLateral:
      if (d.size() != 2) {
        throw Error("lump_to_load: lateral lump must have 2 entries");
      }
      load.force.x() = d(0);
      load.force.y() = d(1);
      break;
    case Subsystem::kBasic:
      if (d.size() != 4) {
        throw Error("lump_to_load: basic lump must have 4 entries");
      }
      load.force.z() = params.weight() - d(0);
      load.torque = -d.tail<3>();
      break;
    case Subsystem::kDegraded:
      if (d.size() != 3) {
        throw Error("lump_to_load: degraded lump must have 3 entries");
      }
      load.force.z() = params.weight() - d(0);
      load.torque.head<2>() = -d.tail<2>();
      break;
  }
  return load;
}

}  // namespace copter_cpi::vehicle
