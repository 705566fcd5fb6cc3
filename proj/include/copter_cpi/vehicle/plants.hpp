#pragma once

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "copter_cpi/ctrlgeom/control_set.hpp"
#include "copter_cpi/vehicle/params.hpp"

namespace copter_cpi::vehicle {

enum class Subsystem { kLateral, kBasic, kDegraded };

std::string_view subsystem_name(Subsystem subsystem);

/// What the first-order state of a channel measures; selects sensor noise.
enum class ChannelKind { kPosition, kAngle };

/// x' = A x + B (u - d), u = H mu, A = [0 I; 0 0], B = [0; M].
struct LinearPlant {
  Subsystem subsystem = Subsystem::kBasic;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  Eigen::MatrixXd H;
  Eigen::MatrixXd M;
  ctrlgeom::BoxConstraint box;
  Eigen::VectorXd d_nominal;
  std::vector<ChannelKind> channels;

  Eigen::Index n() const { return H.rows(); }
  Eigen::Index m() const { return H.cols(); }
  ctrlgeom::ControlSet control_set() const { return ctrlgeom::ControlSet(H, box); }
};

/// A_psi = [sin psi, cos psi; -cos psi, sin psi].
Eigen::Matrix2d lateral_rotation(double psi);

/// States [x y vx vy], inputs (phi_c, theta_c), H = m g A_psi(psi_c), M = -(1/m) I.
LinearPlant lateral_plant(const VehicleParams& params, double psi_c);

/// States [h phi theta psi, rates], inputs f in [0, K], H = B_f,
/// M = diag(1/m, 1/Jx, 1/Jy, 1/Jz), d_nominal = [m g 0 0 0].
LinearPlant basic_plant(const VehicleParams& params);

/// basic_plant without the yaw channel. Throws when rows 1-3 of B_f lose rank.
LinearPlant degraded_plant(const VehicleParams& params);

LinearPlant make_plant(Subsystem subsystem, const VehicleParams& params, double psi_c = 0.0);

}  // namespace copter_cpi::vehicle
