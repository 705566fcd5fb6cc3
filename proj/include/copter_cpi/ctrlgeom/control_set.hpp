#pragma once

#include <Eigen/Dense>

namespace copter_cpi::ctrlgeom {

/// Singular values below this fraction of the largest one count as zero.
inline constexpr double kRankTolerance = 1e-9;

/// Numerical rank by singular values, relative threshold kRankTolerance.
Eigen::Index numerical_rank(const Eigen::MatrixXd& matrix);

/// Per-input bounds lower[i] <= mu[i] <= upper[i].
struct BoxConstraint {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  BoxConstraint() = default;
  /// Throws copter_cpi::Error on mismatched lengths, non-finite entries or lower > upper.
  BoxConstraint(Eigen::VectorXd lower_bounds, Eigen::VectorXd upper_bounds);

  static BoxConstraint symmetric(const Eigen::VectorXd& half_width);

  Eigen::Index size() const { return lower.size(); }
  Eigen::VectorXd midpoint() const { return 0.5 * (lower + upper); }
  Eigen::VectorXd ranges() const { return upper - lower; }
};

/// Attainable control set {H mu : mu in box}, a zonotope in R^n.
class ControlSet {
 public:
  /// Requires n >= 1, m >= n and box.size() == m. The rank of H is recorded
  /// here; the closed-form ACAI refuses rank-deficient sets.
  ControlSet(Eigen::MatrixXd effectiveness, BoxConstraint box);

  const Eigen::MatrixXd& effectiveness() const { return effectiveness_; }
  const BoxConstraint& box() const { return box_; }
  Eigen::Index dim() const { return effectiveness_.rows(); }
  Eigen::Index inputs() const { return effectiveness_.cols(); }
  Eigen::Index rank() const { return rank_; }
  bool full_rank() const { return rank_ == dim(); }

 private:
  Eigen::MatrixXd effectiveness_;
  BoxConstraint box_;
  Eigen::Index rank_ = 0;
};

/// u_c = H * midpoint(box).
Eigen::VectorXd center(const ControlSet& set);

/// Support function of the zonotope: g·u_c + 1/2 sum_i |g·h_i| range_i.
/// Throws on a zero (or wrongly sized) direction.
double support_function(const ControlSet& set, const Eigen::VectorXd& direction);

}  // namespace copter_cpi::ctrlgeom
