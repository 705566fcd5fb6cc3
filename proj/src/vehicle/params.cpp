#include "copter_cpi/vehicle/params.hpp"

#include <cmath>
#include <numbers>

#include "copter_cpi/error.hpp"

namespace copter_cpi::vehicle {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) {
    throw Error("vehicle params: " + what);
  }
}

VehicleParams symmetric_layout(std::string name, int count, double first_azimuth, double first_spin) {
  VehicleParams p;
  p.name = std::move(name);
  p.spin_dirs.resize(count);
  p.azimuths.resize(count);
  for (int i = 0; i < count; ++i) {
    p.azimuths(i) = first_azimuth + 2.0 * std::numbers::pi * i / count;
    p.spin_dirs(i) = (i % 2 == 0) ? first_spin : -first_spin;
  }
  return p;
}

}  // namespace

void VehicleParams::validate() const {
  const Eigen::Index np = propulsor_count();
  require(std::isfinite(mass) && mass > 0.0, "mass must be positive");
  require(inertia.allFinite() && (inertia.array() > 0.0).all(), "inertia entries must be positive");
  require(std::isfinite(gravity) && gravity > 0.0, "gravity must be positive");
  require(np >= 4, "at least 4 propulsors required");
  require(spin_dirs.size() == np, "spin_dirs length must equal propulsor count");
  require(azimuths.size() == np, "azimuths length must equal propulsor count");
  require(max_thrust.allFinite() && (max_thrust.array() > 0.0).all(), "max_thrust entries must be positive");
  require(azimuths.allFinite(), "azimuths must be finite");
  for (Eigen::Index i = 0; i < np; ++i) {
    require(spin_dirs(i) == 1.0 || spin_dirs(i) == -1.0, "spin_dirs entries must be +1 or -1");
  }
  require(std::isfinite(arm_length) && arm_length > 0.0, "arm_length must be positive");
  require(std::isfinite(torque_coeff) && torque_coeff > 0.0, "torque_coeff must be positive");
  const double half_pi = 0.5 * std::numbers::pi;
  require(phi_max > 0.0 && phi_max < half_pi, "phi_max must lie in (0, pi/2)");
  require(theta_max > 0.0 && theta_max < half_pi, "theta_max must lie in (0, pi/2)");
}

VehicleParams default_hexacopter() {
  VehicleParams p = symmetric_layout("hexacopter", 6, 0.0, -1.0);
  p.mass = 1.535;
  p.inertia = Eigen::Vector3d(0.0411, 0.0478, 0.0599);
  p.gravity = 9.81;
  p.arm_length = 0.275;
  p.torque_coeff = 0.1;
  p.max_thrust = Eigen::VectorXd::Constant(6, 6.125);
  p.phi_max = 0.5236;
  p.theta_max = 0.5236;
  return p;
}

VehicleParams default_quad() {
  VehicleParams p = symmetric_layout("quad", 4, 0.25 * std::numbers::pi, 1.0);
  p.mass = 1.2;
  p.inertia = Eigen::Vector3d(0.012, 0.012, 0.022);
  p.gravity = 9.81;
  p.arm_length = 0.22;
  p.torque_coeff = 0.02;
  p.max_thrust = Eigen::VectorXd::Constant(4, 6.0);
  p.phi_max = 0.5236;
  p.theta_max = 0.5236;
  return p;
}

Eigen::MatrixXd effectiveness_matrix(const VehicleParams& params) {
  const Eigen::Index np = params.propulsor_count();
  Eigen::MatrixXd bf(4, np);
  for (Eigen::Index i = 0; i < np; ++i) {
    bf(0, i) = 1.0;
    bf(1, i) = -params.arm_length * std::sin(params.azimuths(i));
    bf(2, i) = params.arm_length * std::cos(params.azimuths(i));
    bf(3, i) = params.torque_coeff * params.spin_dirs(i);
  }
  return bf;
}

Eigen::MatrixXd faulted_effectiveness(const VehicleParams& params, const Eigen::VectorXd& eta) {
  const Eigen::MatrixXd bf = effectiveness_matrix(params);
  if (eta.size() != bf.cols()) {
    throw Error("faulted_effectiveness: eta has wrong length");
  }
  return bf * (Eigen::VectorXd::Ones(eta.size()) - eta).asDiagonal();
}

}  // namespace copter_cpi::vehicle
