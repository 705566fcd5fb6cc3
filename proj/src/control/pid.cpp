#include "copter_cpi/control/pid.hpp"

#include <algorithm>
#include <cmath>

#include "copter_cpi/error.hpp"

namespace copter_cpi::control {

void PidGains::validate() const {
  if (!std::isfinite(kp) || !std::isfinite(ki) || !std::isfinite(kd)) {
    throw Error("pid gains must be finite");
  }
  if (std::isnan(out_min) || std::isnan(out_max) || out_min > out_max) {
    throw Error("pid output limits must be ordered");
  }
}

double Pid::update(double error, double error_rate, double dt) {
  const double candidate = integral_ + error * dt;
  const double unclamped = gains_.kp * error + gains_.ki * candidate + gains_.kd * error_rate;
  const bool pushing_high = unclamped > gains_.out_max && error * gains_.ki > 0.0;
  const bool pushing_low = unclamped < gains_.out_min && error * gains_.ki < 0.0;
  if (!pushing_high && !pushing_low) {
    integral_ = candidate;
  }
  const double out = gains_.kp * error + gains_.ki * integral_ + gains_.kd * error_rate;
  return std::clamp(out, gains_.out_min, gains_.out_max);
}

}  // namespace copter_cpi::control
