#pragma once

#include <Eigen/Dense>

#include <optional>

#include "copter_cpi/ctrlgeom/acai.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "copter_cpi/vehicle/plants.hpp"

namespace copter_cpi::perf {

/// sigma = acai / max_acai when acai > 0, else 0.
double doc(const ctrlgeom::FacetTable& table, const Eigen::VectorXd& d);
double doc(const ctrlgeom::ControlSet& set, const Eigen::VectorXd& d);

/// S = (sigma - sigma_th) / (1 - sigma_th). Throws when sigma_th >= 1.
double cpi(double sigma, double sigma_th);

/// Smallest value cpi can take for a threshold: -sigma_th / (1 - sigma_th).
double cpi_floor(double sigma_th);

struct ThresholdSet {
  double sigma_th_basic = 0.4;
  double sigma_th_degraded = 0.4;
  double sigma_th_lateral = 0.5;
  double confidence = 0.1;

  void validate() const;
  double for_subsystem(vehicle::Subsystem subsystem) const;
};

struct CpiReport {
  double sigma_l = 0.0, sigma_b = 0.0, sigma_d = 0.0;
  double S_l = 0.0, S_b = 0.0, S_d = 0.0;
  bool safe_l = false, safe_b = false, safe_d = false;
  double timestamp = 0.0;
};

/// Disturbance estimates for the three subsystems (2, 4 and 3 entries).
struct SubsystemEstimates {
  Eigen::VectorXd lateral;
  Eigen::VectorXd basic;
  Eigen::VectorXd degraded;
};

CpiReport assess(const vehicle::LinearPlant& lateral, const vehicle::LinearPlant& basic,
                 const vehicle::LinearPlant& degraded, const SubsystemEstimates& estimates,
                 const ThresholdSet& thresholds, double timestamp = 0.0);

/// assess() with the facet tables of the three plants built once.
class CpiMonitor {
 public:
  CpiMonitor(const vehicle::VehicleParams& params, double psi_c, const ThresholdSet& thresholds);
  CpiMonitor(const vehicle::LinearPlant& lateral, const vehicle::LinearPlant& basic,
             const vehicle::LinearPlant& degraded, const ThresholdSet& thresholds);

  /// With `heading`, the lateral set is taken at that yaw instead of psi_c;
  /// the estimate is rotated into the psi_c frame, which preserves distances.
  CpiReport assess(const SubsystemEstimates& estimates, double timestamp,
                   std::optional<double> heading = std::nullopt) const;

  const ctrlgeom::FacetTable& table(vehicle::Subsystem subsystem) const;
  const ThresholdSet& thresholds() const { return thresholds_; }

 private:
  double psi_c_;
  ThresholdSet thresholds_;
  ctrlgeom::FacetTable lateral_;
  ctrlgeom::FacetTable basic_;
  ctrlgeom::FacetTable degraded_;
};

}  // namespace copter_cpi::perf
