#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "copter_cpi/ctrlgeom/control_set.hpp"
#include "copter_cpi/ctrlgeom/partitions.hpp"
#include "copter_cpi/kernels/kernels.hpp"

namespace copter_cpi::ctrlgeom {

struct AcaiResult {
  double value = 0.0;
  /// Index into enumerate_partitions() of the minimizing facet. Diagnostic only.
  std::optional<std::size_t> partition;
};

/// Facet slabs of a full-rank control set, precomputed once so that the
/// signed boundary distance of many points costs one kernel call each.
///
/// For partition j with normal xi_j the slab half-width is
///   w_j = 1/2 sum_{k in H2} |xi_j · h_k| (upper_k - lower_k)
/// and the distance of d to that facet pair is w_j - |xi_j · (u_c - d)|.
/// The ACAI is the minimum over partitions; partitions whose kept columns are
/// rank deficient contribute +inf and are dropped from the table.
class FacetTable {
 public:
  /// Throws copter_cpi::Error("closed-form inapplicable ...") when rank(H) < n.
  explicit FacetTable(const ControlSet& set, kernels::Isa isa = kernels::best_isa());

  AcaiResult acai(std::span<const double> d) const;
  AcaiResult acai(const Eigen::VectorXd& d) const {
    return acai(std::span<const double>(d.data(), static_cast<std::size_t>(d.size())));
  }

  /// Points are the rows of a P x n matrix.
  void acai_batch(const Eigen::MatrixXd& points, std::span<double> out) const;

  /// The ACAI at the center, min_j w_j.
  double max_acai() const { return max_acai_; }

  Eigen::Index dim() const { return dim_; }
  std::size_t facet_count() const { return width_.size(); }
  const std::vector<FacetPartition>& partitions() const { return partitions_; }
  const Eigen::VectorXd& center() const { return center_; }
  kernels::Isa isa() const { return isa_; }

 private:
  kernels::FacetView view() const;

  Eigen::Index dim_ = 0;
  Eigen::VectorXd center_;
  std::vector<FacetPartition> partitions_;
  std::vector<std::size_t> facet_partition_;
  std::vector<double> normals_;
  std::vector<double> width_;
  std::vector<double> offset_;
  double max_acai_ = 0.0;
  kernels::Isa isa_;
};

/// Signed distance from d to the boundary of the attainable set: positive iff
/// d is interior. The magnitude is exact for interior points; outside the set
/// only the sign is meaningful.
double acai(const ControlSet& set, const Eigen::VectorXd& d);
AcaiResult acai_detail(const ControlSet& set, const Eigen::VectorXd& d);

/// acai(set, center(set)), the largest ACAI any d can have.
double max_acai(const ControlSet& set);

}  // namespace copter_cpi::ctrlgeom
