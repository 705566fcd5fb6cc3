#include "copter_cpi/control/allocation.hpp"

#include "copter_cpi/ctrlgeom/control_set.hpp"
#include "copter_cpi/error.hpp"

#include <algorithm>

namespace copter_cpi::control {

Allocator::Allocator(Eigen::MatrixXd effectiveness, Eigen::VectorXd lower, Eigen::VectorXd upper)
    : h_(std::move(effectiveness)), lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.size() != h_.cols() || upper_.size() != h_.cols()) {
    throw Error("allocation: limits do not match the number of propulsors");
  }
  if (ctrlgeom::numerical_rank(h_) < h_.rows()) {
    throw Error("allocation: effectiveness matrix lacks full row rank");
  }
  const Eigen::MatrixXd hht = h_ * h_.transpose();
  pinv_ = h_.transpose() * hht.llt().solve(Eigen::MatrixXd::Identity(h_.rows(), h_.rows()));
}

Allocator::Allocator(Eigen::MatrixXd effectiveness, const Eigen::RowVectorXd& secondary, Eigen::VectorXd lower,
                     Eigen::VectorXd upper)
    : Allocator(std::move(effectiveness), std::move(lower), std::move(upper)) {
  if (secondary.size() != h_.cols()) {
    throw Error("allocation: secondary row does not match the number of propulsors");
  }
  const Eigen::Index m = h_.cols();
  const Eigen::MatrixXd null = Eigen::MatrixXd::Identity(m, m) - pinv_ * h_;
  const Eigen::VectorXd nb = null * secondary.transpose();
  const double gain = secondary.dot(nb);
  if (gain > 1e-12 * std::max(1.0, secondary.squaredNorm())) {
    pinv_ -= nb * (secondary * pinv_) / gain;
  }
}

AllocationResult Allocator::allocate(const Eigen::VectorXd& u) const {
  if (u.size() != h_.rows()) {
    throw Error("allocation: requested wrench has wrong length");
  }
  AllocationResult r;
  r.requested = u;
  const Eigen::VectorXd raw = pinv_ * u;
  r.f = raw.cwiseMax(lower_).cwiseMin(upper_);
  r.saturated = (r.f.array() != raw.array()).any();
  r.achieved = h_ * r.f;
  return r;
}

AllocationResult allocate(const Eigen::VectorXd& u, const Eigen::MatrixXd& effectiveness, const Eigen::VectorXd& lower,
                          const Eigen::VectorXd& upper) {
  return Allocator(effectiveness, lower, upper).allocate(u);
}

}  // namespace copter_cpi::control
