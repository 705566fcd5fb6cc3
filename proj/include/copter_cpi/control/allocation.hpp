#pragma once

#include <Eigen/Dense>

namespace copter_cpi::control {

struct AllocationResult {
  Eigen::VectorXd f;          ///< per-propulsor thrust after clipping
  Eigen::VectorXd requested;  ///< the wrench asked for
  Eigen::VectorXd achieved;   ///< H f, what the clipped thrusts produce
  bool saturated = false;     ///< at least one component was clipped
};

/// Minimum-norm allocation f = H^T (H H^T)^-1 u, clipped to [lower, upper].
class Allocator {
 public:
  /// Throws copter_cpi::Error when H lacks full row rank.
  Allocator(Eigen::MatrixXd effectiveness, Eigen::VectorXd lower, Eigen::VectorXd upper);

  /// Same, with a secondary row driven to zero inside the null space of H:
  /// H f = u stays exact, and among those solutions the one with
  /// secondary . f = 0 of least norm is used (when the null space allows).
  Allocator(Eigen::MatrixXd effectiveness, const Eigen::RowVectorXd& secondary, Eigen::VectorXd lower,
            Eigen::VectorXd upper);

  AllocationResult allocate(const Eigen::VectorXd& u) const;

  const Eigen::MatrixXd& effectiveness() const { return h_; }
  const Eigen::MatrixXd& pseudo_inverse() const { return pinv_; }

 private:
  Eigen::MatrixXd h_;
  Eigen::MatrixXd pinv_;
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
};

AllocationResult allocate(const Eigen::VectorXd& u, const Eigen::MatrixXd& effectiveness,
                          const Eigen::VectorXd& lower, const Eigen::VectorXd& upper);

}  // namespace copter_cpi::control
