#include "copter_cpi/ctrlgeom/control_set.hpp"

#include <cmath>
#include <sstream>

#include "copter_cpi/error.hpp"

namespace copter_cpi::ctrlgeom {

Eigen::Index numerical_rank(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() == 0 || matrix.cols() == 0) {
    return 0;
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXd>(matrix).singularValues();
  const double largest = sv(0);
  if (!(largest > 0.0)) {
    return 0;
  }
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > kRankTolerance * largest) {
      ++rank;
    }
  }
  return rank;
}

BoxConstraint::BoxConstraint(Eigen::VectorXd lower_bounds, Eigen::VectorXd upper_bounds)
    : lower(std::move(lower_bounds)), upper(std::move(upper_bounds)) {
  if (lower.size() != upper.size()) {
    throw Error("box constraint: lower and upper bounds differ in length");
  }
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (!std::isfinite(lower(i)) || !std::isfinite(upper(i))) {
      throw Error("box constraint: non-finite bound at index " + std::to_string(i));
    }
    if (lower(i) > upper(i)) {
      std::ostringstream msg;
      msg << "box constraint: lower[" << i << "] = " << lower(i) << " exceeds upper[" << i
          << "] = " << upper(i);
      throw Error(msg.str());
    }
  }
}

BoxConstraint BoxConstraint::symmetric(const Eigen::VectorXd& half_width) {
  return BoxConstraint(-half_width, half_width);
}

ControlSet::ControlSet(Eigen::MatrixXd effectiveness, BoxConstraint box)
    : effectiveness_(std::move(effectiveness)), box_(std::move(box)) {
  const Eigen::Index n = effectiveness_.rows();
  const Eigen::Index m = effectiveness_.cols();
  if (n < 1) {
    throw Error("control set: effectiveness matrix has no rows");
  }
  if (m < n) {
    throw Error("control set: fewer inputs (" + std::to_string(m) + ") than outputs (" +
                std::to_string(n) + ")");
  }
  if (box_.size() != m) {
    throw Error("control set: box has " + std::to_string(box_.size()) + " entries, expected " +
                std::to_string(m));
  }
  if (!effectiveness_.allFinite()) {
    throw Error("control set: effectiveness matrix has non-finite entries");
  }
  rank_ = numerical_rank(effectiveness_);
}

Eigen::VectorXd center(const ControlSet& set) {
  return set.effectiveness() * set.box().midpoint();
}

double support_function(const ControlSet& set, const Eigen::VectorXd& direction) {
  if (direction.size() != set.dim()) {
    throw Error("support function: direction has wrong length");
  }
  if (!(direction.norm() > 0.0)) {
    throw Error("support function: zero direction");
  }
  const Eigen::VectorXd projections = set.effectiveness().transpose() * direction;
  return direction.dot(center(set)) +
         0.5 * projections.cwiseAbs().dot(set.box().ranges());
}

}  // namespace copter_cpi::ctrlgeom
