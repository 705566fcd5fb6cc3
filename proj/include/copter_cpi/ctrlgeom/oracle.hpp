#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>

#include "copter_cpi/ctrlgeom/control_set.hpp"
#include "copter_cpi/kernels/kernels.hpp"

namespace copter_cpi::ctrlgeom {

struct OracleOptions {
  std::size_t n_dirs = 200000;
  std::uint64_t seed = 0;
  /// Polish the best sampled directions with a shrinking-cone random search.
  bool refine = true;
  std::size_t refine_starts = 16;
  std::size_t refine_batch = 128;
  kernels::Isa isa = kernels::best_isa();
};

/// Boundary distance estimated from the support function alone:
///   min over unit g of  h(g) - g·d.
/// Every evaluated g is a genuine unit direction, so the result bounds the
/// interior distance from above. Directions are drawn uniformly (in antithetic
/// pairs) from a seeded generator; with refine set, the best samples are then
/// improved locally. Deterministic for a given seed.
double acai_oracle(const ControlSet& set, const Eigen::VectorXd& d, const OracleOptions& options);

inline double acai_oracle(const ControlSet& set, const Eigen::VectorXd& d, std::size_t n_dirs,
                          std::uint64_t seed) {
  OracleOptions options;
  options.n_dirs = n_dirs;
  options.seed = seed;
  return acai_oracle(set, d, options);
}

}  // namespace copter_cpi::ctrlgeom
