#include "copter_cpi/control/controller.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "copter_cpi/ctrlgeom/control_set.hpp"
#include "copter_cpi/error.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::control {

namespace {

double wrap_angle(double a) {
  return std::remainder(a, 2.0 * std::numbers::pi);
}

Allocator degraded_allocator(const Eigen::MatrixXd& bf, const Eigen::VectorXd& usable, const Eigen::VectorXd& upper) {
  const Eigen::MatrixXd h = bf.topRows(3) * usable.asDiagonal();
  if (ctrlgeom::numerical_rank(h) < 3) {
    throw Error("unrecoverable configuration: remaining propulsors cannot control thrust, roll and pitch");
  }
  // Yaw torque is not regulated, only kept near zero with the spare freedom.
  const Eigen::RowVectorXd yaw = bf.row(3) * usable.asDiagonal();
  return Allocator(h, yaw, Eigen::VectorXd::Zero(upper.size()), upper);
}

}  // namespace

void ControllerGains::validate() const {
  lateral.validate();
  altitude.validate();
  roll.validate();
  pitch.validate();
  yaw.validate();
  tilt.validate();
  if (!(std::isfinite(tilt_leak) && tilt_leak >= 0.0)) {
    throw Error("gains: tilt_leak must be finite and non-negative");
  }
}

FlightController::FlightController(const vehicle::VehicleParams& params, const ControllerGains& gains,
                                   DegradedAllocation degraded_allocation)
    : params_(params),
      gains_(gains),
      degraded_allocation_(degraded_allocation),
      bf_(vehicle::effectiveness_matrix(params)),
      nominal_(bf_, Eigen::VectorXd::Zero(params.propulsor_count()), params.max_thrust),
      degraded_(degraded_allocator(bf_, Eigen::VectorXd::Ones(params.propulsor_count()), params.max_thrust)) {
  gains_.validate();
  reset();
}

void FlightController::set_failed(const Eigen::VectorXd& eta) {
  if (eta.size() != params_.propulsor_count()) {
    throw Error("controller: eta has wrong length");
  }
  Eigen::VectorXd usable = Eigen::VectorXd::Ones(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (eta(i) >= 1.0) {
      usable(i) = 0.0;
    }
  }
  healthy_ = usable;
  if (degraded_allocation_ == DegradedAllocation::kHealthy) {
    degraded_ = degraded_allocator(bf_, usable, params_.max_thrust);
  }
}

void FlightController::reset() {
  lateral_x_ = Pid(gains_.lateral);
  lateral_y_ = Pid(gains_.lateral);
  altitude_ = Pid(gains_.altitude);
  roll_ = Pid(gains_.roll);
  pitch_ = Pid(gains_.pitch);
  yaw_ = Pid(gains_.yaw);
  tilt_integral_.setZero();
}

Eigen::Vector3d FlightController::degraded_torque(const vehicle::RigidState& state, const Eigen::Vector2d& tilt_ref,
                                                  double dt) {
  const Eigen::Matrix3d r = vehicle::rotation(state.theta);
  const Eigen::Vector3d b3 = r.col(2);
  const Eigen::Vector3d b3_ref = vehicle::rotation(Eigen::Vector3d(tilt_ref.x(), tilt_ref.y(), state.theta.z())).col(2);
  const double p = state.omega.x(), q = state.omega.y(), w = state.omega.z();

  // b3' = q b1 - p b2 and b3'' = (q' + p w) b1 + (q w - p') b2 - (p^2 + q^2) b3.
  Eigen::Matrix2d axes;
  axes << r(0, 0), r(0, 1), r(1, 0), r(1, 1);
  const Eigen::Vector2d err = (b3_ref - b3).head<2>();
  const Eigen::Vector2d rate = (q * r.col(0) - p * r.col(1)).head<2>();

  const PidGains& g = gains_.tilt;
  tilt_integral_ += dt * (axes.transpose() * err - gains_.tilt_leak * tilt_integral_);
  if (g.ki > 0.0) {
    const double cap = std::max(std::abs(g.out_min), std::abs(g.out_max)) / g.ki;
    tilt_integral_ = tilt_integral_.cwiseMax(-cap).cwiseMin(cap);
  }
  const Eigen::Vector2d accel = g.kp * err - g.kd * rate + (p * p + q * q) * b3.head<2>();
  Eigen::Vector2d ab = axes.partialPivLu().solve(accel) + g.ki * tilt_integral_;
  ab = ab.cwiseMax(g.out_min).cwiseMin(g.out_max);

  const Eigen::Vector2d alpha(q * w - ab.y(), ab.x() - p * w);
  const Eigen::Vector3d& j = params_.inertia;
  const Eigen::Vector3d gyro = state.omega.cross(j.cwiseProduct(state.omega));
  return Eigen::Vector3d(j.x() * alpha.x() + gyro.x(), j.y() * alpha.y() + gyro.y(), 0.0);
}

Eigen::Vector2d FlightController::lateral_tilt(const vehicle::RigidState& state, const Reference& ref, double dt) {
  const double ax = lateral_x_.update(ref.position.x() - state.p.x(), -state.v.x(), dt);
  const double ay = lateral_y_.update(ref.position.y() - state.p.y(), -state.v.y(), dt);
  // Small-angle lateral model: a = -g A_psi [phi theta]^T, A_psi orthogonal.
  Eigen::Vector2d tilt = -vehicle::lateral_rotation(state.theta.z()).transpose() * Eigen::Vector2d(ax, ay) /
                         params_.gravity;
  tilt.x() = std::clamp(tilt.x(), -params_.phi_max, params_.phi_max);
  tilt.y() = std::clamp(tilt.y(), -params_.theta_max, params_.theta_max);
  return tilt;
}

double FlightController::thrust(const vehicle::RigidState& state, const Reference& ref, double dt) {
  const double a = altitude_.update(ref.position.z() - state.p.z(), -state.v.z(), dt);
  const double tilt = std::max(std::cos(state.theta.x()) * std::cos(state.theta.y()), 0.5);
  return std::clamp(params_.mass * (params_.gravity + a) / tilt, 0.0, params_.max_thrust.sum());
}

ControlCommand FlightController::update(const vehicle::RigidState& state, const Reference& ref, bool lateral_enabled,
                                        bool degraded, double dt) {
  ControlCommand cmd;
  cmd.tilt_ref = lateral_enabled ? lateral_tilt(state, ref, dt) : Eigen::Vector2d::Zero();
  cmd.u_t = thrust(state, ref, dt);

  const Eigen::Vector3d& j = params_.inertia;
  const Eigen::Vector3d gyro = state.omega.cross(j.cwiseProduct(state.omega));
  AllocationResult alloc;
  if (!degraded) {
    const Eigen::Vector3d err(cmd.tilt_ref.x() - state.theta.x(), cmd.tilt_ref.y() - state.theta.y(),
                              wrap_angle(ref.psi - state.theta.z()));
    const Eigen::Vector3d alpha(roll_.update(err.x(), -state.omega.x(), dt),
                                pitch_.update(err.y(), -state.omega.y(), dt),
                                yaw_.update(err.z(), -state.omega.z(), dt));
    cmd.u_tau = j.cwiseProduct(alpha) + gyro;
    Eigen::Vector4d u;
    u << cmd.u_t, cmd.u_tau;
    alloc = nominal_.allocate(u);
  } else {
    cmd.u_tau = degraded_torque(state, cmd.tilt_ref, dt);
    alloc = degraded_.allocate(Eigen::Vector3d(cmd.u_t, cmd.u_tau.x(), cmd.u_tau.y()));
  }
  cmd.f = std::move(alloc.f);
  cmd.achieved = bf_ * cmd.f;
  cmd.saturated = alloc.saturated;
  return cmd;
}

ControlCommand nominal_control(FlightController& controller, const vehicle::RigidState& state, const Reference& ref,
                               double dt) {
  return controller.update(state, ref, true, false, dt);
}

ControlCommand degraded_control(FlightController& controller, const vehicle::RigidState& state, const Reference& ref,
                                double dt) {
  return controller.update(state, ref, true, true, dt);
}

}  // namespace copter_cpi::control
