#pragma once

#include <Eigen/Dense>

#include <deque>

#include "copter_cpi/estimator/observer.hpp"

namespace copter_cpi::estimator {

/// Timestamped d-hat history with zero-order-hold lookup.
class EstimateHistory {
 public:
  /// Timestamps must be non-decreasing.
  void push(const DisturbanceEstimate& estimate);

  /// Latest entry at or before t; the oldest entry when t precedes all of them.
  /// Entries older than `keep` seconds before t are discarded.
  const DisturbanceEstimate& at(double t, double keep);

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }

 private:
  std::deque<DisturbanceEstimate> entries_;
};

struct CorruptionConfig {
  Eigen::VectorXd bias;  ///< empty means zero
  double delay = 0.0;    ///< s
};

/// est delayed by `delay` (zero-order hold) plus bias. The estimate is first
/// recorded in the history.
DisturbanceEstimate corrupt_estimate(const DisturbanceEstimate& est, const CorruptionConfig& config,
                                     EstimateHistory& history);

}  // namespace copter_cpi::estimator
