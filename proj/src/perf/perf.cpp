#include "copter_cpi/perf/perf.hpp"

#include <algorithm>
#include <cmath>

#include "copter_cpi/error.hpp"

namespace copter_cpi::perf {

namespace {

CpiReport fill(double sigma_l, double sigma_b, double sigma_d, const ThresholdSet& th, double timestamp) {
  CpiReport r;
  r.sigma_l = sigma_l;
  r.sigma_b = sigma_b;
  r.sigma_d = sigma_d;
  r.S_l = cpi(sigma_l, th.sigma_th_lateral);
  r.S_b = cpi(sigma_b, th.sigma_th_basic);
  r.S_d = cpi(sigma_d, th.sigma_th_degraded);
  r.safe_l = r.S_l >= 0.0;
  r.safe_b = r.S_b >= 0.0;
  r.safe_d = r.S_d >= 0.0;
  r.timestamp = timestamp;
  return r;
}

}  // namespace

double doc(const ctrlgeom::FacetTable& table, const Eigen::VectorXd& d) {
  const double rho = table.acai(d).value;
  if (!(rho > 0.0)) {
    return 0.0;
  }
  return std::min(rho / table.max_acai(), 1.0);
}

double doc(const ctrlgeom::ControlSet& set, const Eigen::VectorXd& d) {
  return doc(ctrlgeom::FacetTable(set), d);
}

double cpi(double sigma, double sigma_th) {
  if (!(sigma_th < 1.0)) {
    throw Error("threshold must be < 1");
  }
  return (sigma - sigma_th) / (1.0 - sigma_th);
}

double cpi_floor(double sigma_th) {
  return cpi(0.0, sigma_th);
}

void ThresholdSet::validate() const {
  for (double th : {sigma_th_basic, sigma_th_degraded, sigma_th_lateral}) {
    if (!(th >= 0.0 && th < 1.0)) {
      throw Error("threshold must be < 1 and non-negative");
    }
  }
  if (!(confidence >= 0.0)) {
    throw Error("confidence must be non-negative");
  }
}

double ThresholdSet::for_subsystem(vehicle::Subsystem subsystem) const {
  switch (subsystem) {
    case vehicle::Subsystem::kLateral:
      return sigma_th_lateral;
    case vehicle::Subsystem::kBasic:
      return sigma_th_basic;
    case vehicle::Subsystem::kDegraded:
      return sigma_th_degraded;
  }
  return sigma_th_basic;
}

CpiReport assess(const vehicle::LinearPlant& lateral, const vehicle::LinearPlant& basic,
                 const vehicle::LinearPlant& degraded, const SubsystemEstimates& estimates,
                 const ThresholdSet& thresholds, double timestamp) {
  thresholds.validate();
  return fill(doc(lateral.control_set(), estimates.lateral), doc(basic.control_set(), estimates.basic),
              doc(degraded.control_set(), estimates.degraded), thresholds, timestamp);
}

CpiMonitor::CpiMonitor(const vehicle::VehicleParams& params, double psi_c, const ThresholdSet& thresholds)
    : CpiMonitor(vehicle::lateral_plant(params, psi_c), vehicle::basic_plant(params),
                 vehicle::degraded_plant(params), thresholds) {}

CpiMonitor::CpiMonitor(const vehicle::LinearPlant& lateral, const vehicle::LinearPlant& basic,
                       const vehicle::LinearPlant& degraded, const ThresholdSet& thresholds)
    : psi_c_(0.0),
      thresholds_(thresholds),
      lateral_(lateral.control_set()),
      basic_(basic.control_set()),
      degraded_(degraded.control_set()) {
  thresholds_.validate();
  // The lateral plant carries psi_c only through H = m g A_psi(psi_c).
  const Eigen::Matrix2d a = lateral.H / lateral.H.col(0).norm();
  psi_c_ = std::atan2(a(0, 0), a(0, 1));
}

CpiReport CpiMonitor::assess(const SubsystemEstimates& estimates, double timestamp,
                             std::optional<double> heading) const {
  Eigen::VectorXd lateral = estimates.lateral;
  if (heading) {
    lateral = vehicle::lateral_rotation(psi_c_) * vehicle::lateral_rotation(*heading).transpose() * lateral;
  }
  return fill(doc(lateral_, lateral), doc(basic_, estimates.basic), doc(degraded_, estimates.degraded),
              thresholds_, timestamp);
}

const ctrlgeom::FacetTable& CpiMonitor::table(vehicle::Subsystem subsystem) const {
  switch (subsystem) {
    case vehicle::Subsystem::kLateral:
      return lateral_;
    case vehicle::Subsystem::kBasic:
      return basic_;
    case vehicle::Subsystem::kDegraded:
      return degraded_;
  }
  return basic_;
}

}  // namespace copter_cpi::perf
