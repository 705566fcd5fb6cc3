#include "copter_cpi/supervisor/pipeline.hpp"

#include "copter_cpi/error.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::supervisor {

CpiPipeline::CpiPipeline(const vehicle::VehicleParams& params, const PipelineConfig& config)
    : params_(params),
      config_(config),
      bf_(vehicle::effectiveness_matrix(params)),
      lateral_(vehicle::lateral_plant(params, config.psi_c), config.estimator, config.control_dt),
      basic_(vehicle::basic_plant(params), config.estimator, config.control_dt),
      degraded_(vehicle::degraded_plant(params), config.estimator, config.control_dt),
      monitor_(params, config.psi_c, config.thresholds) {
  if (config.estimator.full_state) {
    throw Error("pipeline: full-state measurement needs velocities, which the trace does not carry");
  }
}

CpiPipeline::Output CpiPipeline::step(double t, const Measurement& z, const Eigen::VectorXd& thrust) {
  if (thrust.size() != bf_.cols()) {
    throw Error("pipeline: thrust vector has wrong length");
  }
  const Measurement& prev = previous_ ? *previous_ : z;

  // The lateral input is the tilt actually held over the interval, H mu.
  const Eigen::Vector2d u_lat = params_.weight() * vehicle::lateral_rotation(prev.theta.z()) *
                                Eigen::Vector2d(prev.theta.x(), prev.theta.y());
  const Eigen::VectorXd u_basic = bf_ * thrust;

  Eigen::VectorXd z_lat = z.p.head<2>();
  Eigen::VectorXd z_basic(4);
  z_basic << z.p.z(), z.theta;
  Eigen::VectorXd z_deg = z_basic.head(3);

  Output out;
  out.raw.lateral = lateral_.step(u_lat, z_lat, t).d_hat;
  out.raw.basic = basic_.step(u_basic, z_basic, t).d_hat;
  out.raw.degraded = degraded_.step(u_basic.head(3), z_deg, t).d_hat;

  out.reported.lateral =
      estimator::corrupt_estimate(lateral_.estimate(), config_.corrupt_lateral, history_lateral_).d_hat;
  out.reported.basic = estimator::corrupt_estimate(basic_.estimate(), config_.corrupt_basic, history_basic_).d_hat;
  out.reported.degraded =
      estimator::corrupt_estimate(degraded_.estimate(), config_.corrupt_degraded, history_degraded_).d_hat;

  const std::optional<double> heading =
      config_.lateral_at_heading ? std::optional<double>(z.theta.z()) : std::nullopt;
  out.report = monitor_.assess(out.reported, t, heading);
  previous_ = z;
  return out;
}

}  // namespace copter_cpi::supervisor
