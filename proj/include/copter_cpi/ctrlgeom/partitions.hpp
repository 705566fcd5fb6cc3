#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

#include "copter_cpi/ctrlgeom/control_set.hpp"

namespace copter_cpi::ctrlgeom {

/// Split of the columns of H into n-1 kept columns (H1) and the remaining
/// m+1-n columns (H2). When H1 has full column rank, xi is the unit normal of
/// the facet slab spanned by H1.
struct FacetPartition {
  std::vector<Eigen::Index> kept;
  std::vector<Eigen::Index> remaining;
  std::optional<Eigen::VectorXd> xi;
};

/// s_m = m! / ((m+1-n)! (n-1)!), the number of ways to pick n-1 of m columns.
std::size_t partition_count(Eigen::Index n, Eigen::Index m);

/// Unit vector orthogonal to every column of an n x (n-1) matrix, or nothing
/// when its rank is below n-1. The first nonzero entry is made positive.
std::optional<Eigen::VectorXd> null_direction(const Eigen::MatrixXd& kept_columns);

/// All C(m, n-1) kept-column subsets in lexicographic order.
std::vector<FacetPartition> enumerate_partitions(const ControlSet& set);

}  // namespace copter_cpi::ctrlgeom
