#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "copter_cpi/threshold/grid.hpp"
#include "copter_cpi/threshold/judge.hpp"

namespace copter_cpi::threshold {

/// One row of the bucket table. `bucket` is 0 for the sigma = 1 row,
/// k = 1..K for [1 - k ds, 1 - (k-1) ds), and K + 1 for any remainder below
/// 1 - K ds that the search never reaches.
struct BucketRow {
  std::string label;
  int bucket = 0;
  double lower = 0.0;
  double upper = 1.0;
  std::size_t total = 0;
  std::size_t judged = 0;
  std::size_t stable = 0;
  double percentage = 0.0;  ///< stable / total * 100
  bool searched = true;
};

struct BucketReport {
  std::vector<BucketRow> rows;
  std::size_t grid_size = 0;
  /// Points with sigma = 0 (also counted in whichever row holds 0).
  std::size_t uncontrollable_total = 0;
  std::size_t uncontrollable_judged = 0;
  std::size_t uncontrollable_stable = 0;
};

struct PointResult {
  double sigma = 0.0;
  bool judged = false;
  StabilityJudgment judgment;
};

struct ThresholdResult {
  double sigma_th = 0.0;
  /// Every searched bucket was stable.
  bool no_instability = false;
  /// Instability already in the top bucket, so sigma_th = 1.
  bool unreasonable = false;
  /// Bucket k where the search stopped, 0 when it never did.
  int stopping_bucket = 0;
  BucketReport report;
  std::vector<PointResult> points;
};

using Judge = std::function<StabilityJudgment(const Eigen::VectorXd& d, double sigma)>;

struct SweepOptions {
  double delta_sigma = 0.1;
  std::size_t workers = 1;
  /// Simulate sigma = 0 points too; otherwise they count as unstable unjudged.
  bool judge_uncontrollable = false;
};

/// Number of full buckets, floor(1 / delta_sigma).
int bucket_count(double delta_sigma);

/// Row index per the BucketRow numbering.
int bucket_of(double sigma, double delta_sigma);

/// Judges every point with sigma > 0 (and sigma = 0 on request), fills the
/// bucket table, then walks buckets from sigma = 1 down and stops at the first
/// one holding an unstable point: sigma_th = 1 - (k - 1) delta_sigma.
ThresholdResult determine_threshold(const DisturbanceGrid& grid, const std::vector<double>& sigma,
                                    const Judge& judge, const SweepOptions& options);

/// Indices of points with sigma_th <= sigma <= sigma_th + c_sigma.
std::vector<std::size_t> confidence_scan(const std::vector<double>& sigma, double sigma_th, double c_sigma);

/// Stable iff sigma >= sigma_min.
Judge synthetic_judge(double sigma_min);

/// stability_judge on a fixed family, vehicle and gains.
Judge simulation_judge(vehicle::Subsystem family, const vehicle::VehicleParams& params,
                       const control::ControllerGains& gains, const JudgeConfig& config = {});

}  // namespace copter_cpi::threshold
