#include "copter_cpi/vehicle/plants.hpp"

#include <cmath>

#include "copter_cpi/error.hpp"

namespace copter_cpi::vehicle {

namespace {

LinearPlant assemble(Subsystem subsystem, Eigen::MatrixXd h, Eigen::MatrixXd m, ctrlgeom::BoxConstraint box,
                     Eigen::VectorXd d_nominal, std::vector<ChannelKind> channels) {
  const Eigen::Index n = h.rows();
  LinearPlant plant;
  plant.subsystem = subsystem;
  plant.A = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  plant.A.topRightCorner(n, n).setIdentity();
  plant.B = Eigen::MatrixXd::Zero(2 * n, n);
  plant.B.bottomRows(n) = m;
  plant.H = std::move(h);
  plant.M = std::move(m);
  plant.box = std::move(box);
  plant.d_nominal = std::move(d_nominal);
  plant.channels = std::move(channels);
  return plant;
}

ctrlgeom::BoxConstraint thrust_box(const VehicleParams& params) {
  return ctrlgeom::BoxConstraint(Eigen::VectorXd::Zero(params.propulsor_count()), params.max_thrust);
}

}  // namespace

std::string_view subsystem_name(Subsystem subsystem) {
  switch (subsystem) {
    case Subsystem::kLateral:
      return "lateral";
    case Subsystem::kBasic:
      return "basic";
    case Subsystem::kDegraded:
      return "degraded";
  }
  return "unknown";
}

Eigen::Matrix2d lateral_rotation(double psi) {
  Eigen::Matrix2d a;
  a << std::sin(psi), std::cos(psi), -std::cos(psi), std::sin(psi);
  return a;
}

LinearPlant lateral_plant(const VehicleParams& params, double psi_c) {
  const Eigen::MatrixXd h = params.weight() * lateral_rotation(psi_c);
  const Eigen::MatrixXd m = -(1.0 / params.mass) * Eigen::MatrixXd::Identity(2, 2);
  ctrlgeom::BoxConstraint box = ctrlgeom::BoxConstraint::symmetric(Eigen::Vector2d(params.phi_max, params.theta_max));
  return assemble(Subsystem::kLateral, h, m, std::move(box), Eigen::VectorXd::Zero(2),
                  {ChannelKind::kPosition, ChannelKind::kPosition});
}

LinearPlant basic_plant(const VehicleParams& params) {
  const Eigen::MatrixXd bf = effectiveness_matrix(params);
  if (ctrlgeom::numerical_rank(bf) < 4) {
    throw Error("basic plant: effectiveness matrix has rank below 4");
  }
  Eigen::VectorXd mdiag(4);
  mdiag << 1.0 / params.mass, 1.0 / params.inertia(0), 1.0 / params.inertia(1), 1.0 / params.inertia(2);
  Eigen::VectorXd d_nominal = Eigen::VectorXd::Zero(4);
  d_nominal(0) = params.weight();
  return assemble(Subsystem::kBasic, bf, mdiag.asDiagonal(), thrust_box(params), d_nominal,
                  {ChannelKind::kPosition, ChannelKind::kAngle, ChannelKind::kAngle, ChannelKind::kAngle});
}

LinearPlant degraded_plant(const VehicleParams& params) {
  const Eigen::MatrixXd h = effectiveness_matrix(params).topRows(3);
  if (ctrlgeom::numerical_rank(h) < 3) {
    throw Error("degraded plant: thrust/roll/pitch rows have rank below 3");
  }
  const Eigen::Vector3d mdiag(1.0 / params.mass, 1.0 / params.inertia(0), 1.0 / params.inertia(1));
  Eigen::VectorXd d_nominal = Eigen::VectorXd::Zero(3);
  d_nominal(0) = params.weight();
  return assemble(Subsystem::kDegraded, h, Eigen::MatrixXd(mdiag.asDiagonal()), thrust_box(params), d_nominal,
                  {ChannelKind::kPosition, ChannelKind::kAngle, ChannelKind::kAngle});
}

LinearPlant make_plant(Subsystem subsystem, const VehicleParams& params, double psi_c) {
  switch (subsystem) {
    case Subsystem::kLateral:
      return lateral_plant(params, psi_c);
    case Subsystem::kBasic:
      return basic_plant(params);
    case Subsystem::kDegraded:
      return degraded_plant(params);
  }
  throw Error("make_plant: unknown subsystem");
}

}  // namespace copter_cpi::vehicle
