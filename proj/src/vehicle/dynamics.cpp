#include "copter_cpi/vehicle/dynamics.hpp"

#include <cmath>
#include <numbers>

namespace copter_cpi::vehicle {

namespace {

struct Derivative {
  Eigen::Vector3d dp;
  Eigen::Vector3d dv;
  Eigen::Vector3d dtheta;
  Eigen::Vector3d domega;
};

Derivative derivative(const RigidState& s, const Eigen::Vector4d& wrench, const ExternalLoad& load,
                      const VehicleParams& params) {
  // World frame of the equations of motion is north-east-down; RigidState
  // carries altitude, so the third axis flips on the way in and out.
  const Eigen::Matrix3d r = rotation(s.theta);
  const Eigen::Vector3d e3 = Eigen::Vector3d::UnitZ();
  const Eigen::Vector3d ext_ned(load.force.x(), load.force.y(), -load.force.z());
  const Eigen::Vector3d acc_ned =
      params.gravity * e3 + (-wrench(0) * r.col(2) + ext_ned) / params.mass;

  const Eigen::Vector3d jw = params.inertia.cwiseProduct(s.omega);
  const Eigen::Vector3d torque = wrench.tail<3>() + load.torque - s.omega.cross(jw);

  Derivative d;
  d.dp = s.v;
  d.dv = Eigen::Vector3d(acc_ned.x(), acc_ned.y(), -acc_ned.z());
  d.dtheta = euler_rate_matrix(s.theta) * s.omega;
  d.domega = torque.cwiseQuotient(params.inertia);
  return d;
}

RigidState advance(const RigidState& s, const Derivative& d, double h) {
  RigidState out;
  out.p = s.p + h * d.dp;
  out.v = s.v + h * d.dv;
  out.theta = s.theta + h * d.dtheta;
  out.omega = s.omega + h * d.domega;
  return out;
}

}  // namespace

Eigen::Matrix3d rotation(const Eigen::Vector3d& theta) {
  const double cf = std::cos(theta(0)), sf = std::sin(theta(0));
  const double ct = std::cos(theta(1)), st = std::sin(theta(1));
  const double cp = std::cos(theta(2)), sp = std::sin(theta(2));
  Eigen::Matrix3d r;
  r << ct * cp, cp * st * sf - sp * cf, cp * st * cf + sp * sf,
       ct * sp, sp * st * sf + cp * cf, sp * st * cf - cp * sf,
       -st, sf * ct, cf * ct;
  return r;
}

Eigen::Matrix3d euler_rate_matrix(const Eigen::Vector3d& theta) {
  const double cf = std::cos(theta(0)), sf = std::sin(theta(0));
  const double ct = std::cos(theta(1)), tt = std::tan(theta(1));
  Eigen::Matrix3d w;
  w << 1.0, tt * sf, tt * cf,
       0.0, cf, -sf,
       0.0, sf / ct, cf / ct;
  return w;
}

RigidState step_wrench(const RigidState& state, const Eigen::Vector4d& wrench, const ExternalLoad& load,
                       const VehicleParams& params, double dt) {
  const Derivative k1 = derivative(state, wrench, load, params);
  const Derivative k2 = derivative(advance(state, k1, 0.5 * dt), wrench, load, params);
  const Derivative k3 = derivative(advance(state, k2, 0.5 * dt), wrench, load, params);
  const Derivative k4 = derivative(advance(state, k3, dt), wrench, load, params);

  Derivative sum;
  sum.dp = (k1.dp + 2.0 * k2.dp + 2.0 * k3.dp + k4.dp) / 6.0;
  sum.dv = (k1.dv + 2.0 * k2.dv + 2.0 * k3.dv + k4.dv) / 6.0;
  sum.dtheta = (k1.dtheta + 2.0 * k2.dtheta + 2.0 * k3.dtheta + k4.dtheta) / 6.0;
  sum.domega = (k1.domega + 2.0 * k2.domega + 2.0 * k3.domega + k4.domega) / 6.0;
  RigidState next = advance(state, sum, dt);

  if (!next.finite()) {
    throw SimulationDiverged("simulation diverged: non-finite state");
  }
  const double limit = 0.5 * std::numbers::pi - kEulerMargin;
  if (std::abs(next.theta(0)) >= limit || std::abs(next.theta(1)) >= limit) {
    throw SimulationDiverged("simulation diverged: Euler angle singularity");
  }
  return next;
}

RigidState step_nonlinear(const RigidState& state, const Eigen::VectorXd& thrust, const ExternalLoad& load,
                          const VehicleParams& params, double dt) {
  if (!(dt > 0.0 && dt <= 0.02)) {
    throw Error("step_nonlinear: dt must lie in (0, 0.02]");
  }
  if (thrust.size() != params.propulsor_count()) {
    throw Error("step_nonlinear: thrust vector has wrong length");
  }
  const Eigen::VectorXd clipped = thrust.cwiseMax(0.0).cwiseMin(params.max_thrust);
  const Eigen::Vector4d wrench = effectiveness_matrix(params) * clipped;
  return step_wrench(state, wrench, load, params, dt);
}

}  // namespace copter_cpi::vehicle
