#pragma once

#include <Eigen/Dense>

#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::estimator {

struct DisturbanceEstimate {
  Eigen::VectorXd d_hat;
  /// Covariance of the augmented state [x; d], (2n + n) square.
  Eigen::MatrixXd covariance;
  double timestamp = 0.0;
};

struct EstimatorConfig {
  /// Spectral density of white noise on every plant state.
  double process_noise = 1e-6;
  /// Random-walk intensity of d on force channels, N^2/s.
  double walk_force = 1.0;
  /// Random-walk intensity of d on torque channels, (N m)^2/s.
  double walk_torque = 0.1;
  /// Sensor standard deviations (m, rad) the filter is tuned for.
  double meas_noise_pos = 0.1;
  double meas_noise_att = 0.01;
  /// Actual sensor noise is (1 + noise_scale) times the nominal level.
  double noise_scale = 0.0;
  /// Initial standard deviation of d-hat around the nominal lump, N and N m.
  double initial_d_std = 2.0;
  double initial_torque_std = 0.1;
  /// Measure velocities/rates as well as positions/angles.
  bool full_state = false;

  void validate() const;
};

/// Augmented state x_a = [x; d] of x' = A x + B (u - d), d' = w.
struct KfState {
  Eigen::VectorXd x;
  DisturbanceEstimate estimate;
};

/// Discretized augmented model, reusable across steps with the same dt.
struct KfModel {
  Eigen::MatrixXd phi;      ///< exp(F dt)
  Eigen::MatrixXd gamma;    ///< input map over one step, u held constant
  Eigen::MatrixXd q;        ///< exact discrete process covariance
  Eigen::MatrixXd c;        ///< measurement matrix
  Eigen::MatrixXd r;        ///< measurement covariance
  double dt = 0.0;
};

KfModel discretize(const vehicle::LinearPlant& plant, const EstimatorConfig& config, double dt);

/// Filter start: x from the first measurement, d at the plant's nominal lump.
KfState initial_state(const vehicle::LinearPlant& plant, const EstimatorConfig& config,
                      const Eigen::VectorXd& z0, double t0);

/// Predict over model.dt with input u, then update with measurement z.
/// Throws copter_cpi::Error when the covariance stays indefinite after symmetrizing.
KfState kf_step(const KfModel& model, const KfState& prev, const Eigen::VectorXd& u,
                const Eigen::VectorXd& z);

/// kf_step with the model discretized on the fly.
KfState kf_step(const vehicle::LinearPlant& plant, const KfState& prev, const Eigen::VectorXd& u,
                const Eigen::VectorXd& z, const EstimatorConfig& config, double dt);

/// Convenience wrapper owning the discretized model and the running state.
class DisturbanceObserver {
 public:
  DisturbanceObserver(const vehicle::LinearPlant& plant, const EstimatorConfig& config, double dt);

  void reset(const Eigen::VectorXd& z0, double t0);
  bool initialized() const { return initialized_; }

  /// Starts the filter from z on the first call. The estimate is stamped t.
  const DisturbanceEstimate& step(const Eigen::VectorXd& u, const Eigen::VectorXd& z, double t);

  const DisturbanceEstimate& estimate() const { return state_.estimate; }
  const Eigen::VectorXd& state() const { return state_.x; }
  Eigen::Index measurement_size() const { return model_.c.rows(); }

 private:
  vehicle::LinearPlant plant_;
  EstimatorConfig config_;
  KfModel model_;
  KfState state_;
  bool initialized_ = false;
};

}  // namespace copter_cpi::estimator
