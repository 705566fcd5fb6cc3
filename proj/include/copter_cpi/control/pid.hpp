#pragma once

#include <limits>

namespace copter_cpi::control {

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
  double out_min = -std::numeric_limits<double>::infinity();
  double out_max = std::numeric_limits<double>::infinity();

  /// Throws copter_cpi::Error on non-finite gains or out_min > out_max.
  void validate() const;
};

/// PID with the derivative taken from a supplied error rate (no numerical
/// differentiation) and integrator clamping: the integral stops growing while
/// the output sits on a limit in the direction of the error.
class Pid {
 public:
  Pid() = default;
  explicit Pid(const PidGains& gains) : gains_(gains) {}

  double update(double error, double error_rate, double dt);
  void reset() { integral_ = 0.0; }

  double integral() const { return integral_; }
  void set_integral(double value) { integral_ = value; }
  const PidGains& gains() const { return gains_; }

 private:
  PidGains gains_;
  double integral_ = 0.0;
};

}  // namespace copter_cpi::control
