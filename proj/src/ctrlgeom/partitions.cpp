#include "copter_cpi/ctrlgeom/partitions.hpp"

#include <cmath>

#include "copter_cpi/error.hpp"

namespace copter_cpi::ctrlgeom {

std::size_t partition_count(Eigen::Index n, Eigen::Index m) {
  const Eigen::Index k = n - 1;
  if (k < 0 || k > m) {
    return 0;
  }
  // C(m, k) built incrementally; every intermediate value is itself a binomial.
  std::size_t count = 1;
  for (Eigen::Index i = 1; i <= k; ++i) {
    count = count * static_cast<std::size_t>(m - k + i) / static_cast<std::size_t>(i);
  }
  return count;
}

std::optional<Eigen::VectorXd> null_direction(const Eigen::MatrixXd& kept_columns) {
  const Eigen::Index n = kept_columns.rows();
  if (n < 1) {
    return std::nullopt;
  }
  if (kept_columns.cols() == 0) {
    if (n != 1) {
      return std::nullopt;
    }
    return Eigen::VectorXd::Ones(1);
  }
  if (numerical_rank(kept_columns) < n - 1) {
    return std::nullopt;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(kept_columns, Eigen::ComputeFullU);
  Eigen::VectorXd xi = svd.matrixU().col(n - 1);
  xi.normalize();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(xi(i)) > 1e-12) {
      if (xi(i) < 0.0) {
        xi = -xi;
      }
      break;
    }
  }
  return xi;
}

std::vector<FacetPartition> enumerate_partitions(const ControlSet& set) {
  const Eigen::Index n = set.dim();
  const Eigen::Index m = set.inputs();
  const Eigen::Index k = n - 1;
  const Eigen::MatrixXd& h = set.effectiveness();

  std::vector<FacetPartition> out;
  out.reserve(partition_count(n, m));

  std::vector<Eigen::Index> pick(static_cast<std::size_t>(k));
  for (Eigen::Index i = 0; i < k; ++i) {
    pick[static_cast<std::size_t>(i)] = i;
  }
  while (true) {
    FacetPartition part;
    part.kept = pick;
    std::size_t next = 0;
    for (Eigen::Index c = 0; c < m; ++c) {
      if (next < pick.size() && pick[next] == c) {
        ++next;
      } else {
        part.remaining.push_back(c);
      }
    }
    Eigen::MatrixXd kept(n, k);
    for (Eigen::Index i = 0; i < k; ++i) {
      kept.col(i) = h.col(pick[static_cast<std::size_t>(i)]);
    }
    part.xi = null_direction(kept);
    out.push_back(std::move(part));

    // Advance to the next lexicographic k-subset of {0..m-1}.
    Eigen::Index i = k - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == m - k + i) {
      --i;
    }
    if (i < 0) {
      break;
    }
    ++pick[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < k; ++j) {
      pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

}  // namespace copter_cpi::ctrlgeom
