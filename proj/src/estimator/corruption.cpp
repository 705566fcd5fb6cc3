#include "copter_cpi/estimator/corruption.hpp"

#include "copter_cpi/error.hpp"

namespace copter_cpi::estimator {

namespace {

// Samples land on a fixed control grid; the slack absorbs accumulated rounding.
constexpr double kTimeSlack = 1e-9;

}  // namespace

void EstimateHistory::push(const DisturbanceEstimate& estimate) {
  if (!entries_.empty() && estimate.timestamp < entries_.back().timestamp) {
    throw Error("estimate history: timestamps must be non-decreasing");
  }
  entries_.push_back(estimate);
}

const DisturbanceEstimate& EstimateHistory::at(double t, double keep) {
  if (entries_.empty()) {
    throw Error("estimate history: lookup in empty history");
  }
  while (entries_.size() > 1 && entries_[1].timestamp <= t - keep + kTimeSlack) {
    entries_.pop_front();
  }
  std::size_t best = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    if (entries_[i].timestamp <= t + kTimeSlack) {
      best = i;
    } else {
      break;
    }
  }
  return entries_[best];
}

DisturbanceEstimate corrupt_estimate(const DisturbanceEstimate& est, const CorruptionConfig& config,
                                     EstimateHistory& history) {
  if (config.delay < 0.0) {
    throw Error("corrupt_estimate: delay must be non-negative");
  }
  history.push(est);
  DisturbanceEstimate out = history.at(est.timestamp - config.delay, 0.0);
  out.timestamp = est.timestamp;
  if (config.bias.size() > 0) {
    if (config.bias.size() != out.d_hat.size()) {
      throw Error("corrupt_estimate: bias has wrong length");
    }
    out.d_hat += config.bias;
  }
  return out;
}

}  // namespace copter_cpi::estimator
