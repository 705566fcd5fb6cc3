#include "copter_cpi/threshold/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "copter_cpi/error.hpp"

namespace copter_cpi::threshold {

namespace {

constexpr double kTopBucket = 1.0 - 1e-12;

double bucket_lower(int k, double ds) {
  const double lo = 1.0 - k * ds;
  return std::abs(lo) < 1e-12 ? 0.0 : lo;
}

double bucket_upper(int k, double ds) {
  return 1.0 - (k - 1) * ds;
}

std::string format_bound(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

int bucket_count(double delta_sigma) {
  if (!(delta_sigma > 0.0 && delta_sigma <= 1.0)) {
    throw Error("delta_sigma must lie in (0, 1]");
  }
  return static_cast<int>(std::floor(1.0 / delta_sigma + 1e-9));
}

int bucket_of(double sigma, double delta_sigma) {
  const int count = bucket_count(delta_sigma);
  if (sigma >= kTopBucket) {
    return 0;
  }
  int k = static_cast<int>(std::floor((1.0 - sigma) / delta_sigma)) + 1;
  k = std::clamp(k, 1, count + 1);
  // Settle rounding at the edges against the same bound expressions used for labels.
  while (k > 1 && sigma >= bucket_upper(k, delta_sigma)) {
    --k;
  }
  while (k <= count && sigma < bucket_lower(k, delta_sigma)) {
    ++k;
  }
  return k;
}

ThresholdResult determine_threshold(const DisturbanceGrid& grid, const std::vector<double>& sigma, const Judge& judge,
                                    const SweepOptions& options) {
  if (sigma.size() != grid.size()) {
    throw Error("determine_threshold: sigma list does not match the grid");
  }
  const double ds = options.delta_sigma;
  const int count = bucket_count(ds);

  ThresholdResult result;
  result.points.resize(grid.size());
  parallel_for(grid.size(), options.workers, [&](std::size_t i) {
    PointResult& p = result.points[i];
    p.sigma = sigma[i];
    if (sigma[i] > 0.0 || options.judge_uncontrollable) {
      p.judged = true;
      p.judgment = judge(grid.point(i), sigma[i]);
    } else {
      p.judgment.stable = false;
      p.judgment.max_error_tail = std::numeric_limits<double>::infinity();
    }
  });

  BucketReport& report = result.report;
  report.grid_size = grid.size();
  report.rows.push_back(BucketRow{"1", 0, 1.0, 1.0, 0, 0, 0, 0.0, true});
  for (int k = 1; k <= count; ++k) {
    const double lo = bucket_lower(k, ds);
    const double hi = bucket_upper(k, ds);
    report.rows.push_back(BucketRow{"[" + format_bound(lo) + "," + format_bound(hi) + ")", k, lo, hi, 0, 0, 0, 0.0,
                                    true});
  }
  const double residual = bucket_lower(count, ds);
  if (residual > 0.0) {
    report.rows.push_back(
        BucketRow{"[0," + format_bound(residual) + ")", count + 1, 0.0, residual, 0, 0, 0, 0.0, false});
  }

  for (const PointResult& p : result.points) {
    BucketRow& row = report.rows[static_cast<std::size_t>(bucket_of(p.sigma, ds))];
    ++row.total;
    row.judged += p.judged ? 1 : 0;
    row.stable += p.judgment.stable ? 1 : 0;
    if (p.sigma <= 0.0) {
      ++report.uncontrollable_total;
      report.uncontrollable_judged += p.judged ? 1 : 0;
      report.uncontrollable_stable += p.judgment.stable ? 1 : 0;
    }
  }
  for (BucketRow& row : report.rows) {
    row.percentage = row.total == 0 ? 0.0 : 100.0 * static_cast<double>(row.stable) / static_cast<double>(row.total);
  }

  // sigma = 1 points belong to the first bucket [1 - ds, 1].
  for (int k = 1; k <= count; ++k) {
    std::size_t total = report.rows[static_cast<std::size_t>(k)].total;
    std::size_t stable = report.rows[static_cast<std::size_t>(k)].stable;
    if (k == 1) {
      total += report.rows[0].total;
      stable += report.rows[0].stable;
    }
    if (stable < total) {
      result.stopping_bucket = k;
      result.sigma_th = bucket_upper(k, ds);
      result.unreasonable = k == 1;
      return result;
    }
  }
  result.no_instability = true;
  result.sigma_th = std::max(0.0, bucket_lower(count, ds));
  return result;
}

std::vector<std::size_t> confidence_scan(const std::vector<double>& sigma, double sigma_th, double c_sigma) {
  if (!(c_sigma >= 0.0)) {
    throw Error("confidence value must be non-negative");
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    if (sigma[i] >= sigma_th && sigma[i] <= sigma_th + c_sigma) {
      out.push_back(i);
    }
  }
  return out;
}

Judge synthetic_judge(double sigma_min) {
  return [sigma_min](const Eigen::VectorXd&, double sigma) {
    StabilityJudgment j;
    j.stable = sigma >= sigma_min;
    j.max_error_tail = j.stable ? 0.0 : std::numeric_limits<double>::infinity();
    return j;
  };
}

Judge simulation_judge(vehicle::Subsystem family, const vehicle::VehicleParams& params,
                       const control::ControllerGains& gains, const JudgeConfig& config) {
  config.validate();
  return [family, params, gains, config](const Eigen::VectorXd& d, double) {
    return stability_judge(family, d, params, gains, config);
  };
}

}  // namespace copter_cpi::threshold
