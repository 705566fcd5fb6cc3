#pragma once

#include <Eigen/Dense>

#include <optional>

#include "copter_cpi/estimator/corruption.hpp"
#include "copter_cpi/estimator/observer.hpp"
#include "copter_cpi/perf/perf.hpp"
#include "copter_cpi/vehicle/params.hpp"

namespace copter_cpi::supervisor {

/// Sensor sample: position (x, y, h) and Euler angles.
struct Measurement {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  Eigen::Vector3d theta = Eigen::Vector3d::Zero();
};

struct PipelineConfig {
  estimator::EstimatorConfig estimator;
  estimator::CorruptionConfig corrupt_lateral;
  estimator::CorruptionConfig corrupt_basic;
  estimator::CorruptionConfig corrupt_degraded;
  perf::ThresholdSet thresholds;
  double control_dt = 0.01;
  double psi_c = 0.0;
  /// Assess the lateral set at the measured heading rather than psi_c.
  bool lateral_at_heading = true;
};

/// Estimation and assessment chain shared by simulation and log replay:
/// per-subsystem Kalman filters, estimate corruption, then CPI.
class CpiPipeline {
 public:
  struct Output {
    perf::SubsystemEstimates raw;
    perf::SubsystemEstimates reported;
    perf::CpiReport report;
  };

  CpiPipeline(const vehicle::VehicleParams& params, const PipelineConfig& config);

  /// One sample at time t. `thrust` is the commanded propulsor thrust held over
  /// the interval that ends at t.
  Output step(double t, const Measurement& z, const Eigen::VectorXd& thrust);

  const perf::CpiMonitor& monitor() const { return monitor_; }

 private:
  vehicle::VehicleParams params_;
  PipelineConfig config_;
  Eigen::MatrixXd bf_;
  estimator::DisturbanceObserver lateral_;
  estimator::DisturbanceObserver basic_;
  estimator::DisturbanceObserver degraded_;
  estimator::EstimateHistory history_lateral_;
  estimator::EstimateHistory history_basic_;
  estimator::EstimateHistory history_degraded_;
  perf::CpiMonitor monitor_;
  std::optional<Measurement> previous_;
};

}  // namespace copter_cpi::supervisor
