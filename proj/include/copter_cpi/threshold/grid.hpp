#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <vector>

#include "copter_cpi/ctrlgeom/acai.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::threshold {

inline constexpr std::size_t kDefaultGridCap = 10'000'000;

/// Uniform lattice over a box with nd points per axis, endpoints included.
/// Point i enumerates the first axis slowest. Points are generated on demand.
class DisturbanceGrid {
 public:
  /// Throws copter_cpi::Error("grid too large") when nd^n exceeds cap.
  DisturbanceGrid(Eigen::VectorXd lower, Eigen::VectorXd upper, int nd, std::size_t cap = kDefaultGridCap);

  std::size_t size() const { return size_; }
  Eigen::Index dim() const { return lower_.size(); }
  int nd() const { return nd_; }
  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }

  double coordinate(Eigen::Index axis, int step) const;
  Eigen::VectorXd point(std::size_t index) const;
  /// Points begin .. begin+count-1 as rows.
  Eigen::MatrixXd rows(std::size_t begin, std::size_t count) const;

 private:
  Eigen::VectorXd lower_;
  Eigen::VectorXd upper_;
  int nd_;
  std::size_t size_;
};

DisturbanceGrid make_grid(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, int nd,
                          std::size_t cap = kDefaultGridCap);

struct GridBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

/// Disturbance box swept by default: thrust lump in [0, 2 m g] and each torque
/// lump within the largest one-sided torque the propulsors can make (basic,
/// degraded); lateral force within m g times the larger tilt limit, padded 50%.
GridBounds default_bounds(vehicle::Subsystem subsystem, const vehicle::VehicleParams& params);

/// Calls fn(i) for i in [0, count) on up to `workers` threads. Work is handed
/// out in contiguous chunks; fn must only touch state owned by index i.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

/// Available hardware threads, at least 1.
std::size_t default_workers();

/// DoC of every grid point, in grid order.
std::vector<double> doc_over_grid(const ctrlgeom::FacetTable& table, const DisturbanceGrid& grid,
                                  std::size_t workers = 1);
std::vector<double> doc_over_grid(const ctrlgeom::ControlSet& set, const DisturbanceGrid& grid,
                                  std::size_t workers = 1);

}  // namespace copter_cpi::threshold
