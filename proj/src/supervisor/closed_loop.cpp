#include "copter_cpi/supervisor/closed_loop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "copter_cpi/error.hpp"

namespace copter_cpi::supervisor {

namespace {

int ratio_steps(double total, double step, const char* what) {
  const double r = total / step;
  const double rounded = std::round(r);
  if (!(rounded >= 1.0) || std::abs(r - rounded) > 1e-9 * std::max(1.0, r)) {
    throw Error(std::string("scenario: ") + what);
  }
  return static_cast<int>(rounded);
}

}  // namespace

void Scenario::validate() const {
  vehicle.validate();
  gains.validate();
  pipeline.estimator.validate();
  pipeline.thresholds.validate();
  fault.validate();
  if (fault.eta.size() != 0 && fault.eta.size() != vehicle.propulsor_count()) {
    throw Error("scenario: fault eta length must equal the propulsor count");
  }
  if (!(duration > 0.0)) {
    throw Error("scenario: duration must be positive");
  }
  if (!(physics_dt > 0.0 && physics_dt <= 0.02)) {
    throw Error("scenario: physics_dt must lie in (0, 0.02]");
  }
  ratio_steps(pipeline.control_dt, physics_dt, "control_dt must be a whole multiple of physics_dt");
  if (debounce < 1) {
    throw Error("scenario: debounce must be at least 1");
  }
  if (fault.eta.size() != 0 && fault.onset_time > duration) {
    throw Error("scenario: fault onset lies beyond the duration");
  }
  for (const PayloadEvent& e : payload) {
    if (e.time < 0.0 || e.time > duration || e.mass < 0.0) {
      throw Error("scenario: payload event outside the run or with negative mass");
    }
  }
  for (const WindEvent& e : wind) {
    if (e.time < 0.0 || e.time > duration) {
      throw Error("scenario: wind event outside the run");
    }
  }
}

vehicle::OffNominal Scenario::conditions(double t) const {
  vehicle::OffNominal c;
  c.eta = fault.eta_at(t, vehicle.propulsor_count());
  double latest = -std::numeric_limits<double>::infinity();
  for (const PayloadEvent& e : payload) {
    if (e.time <= t && e.time >= latest) {
      latest = e.time;
      c.payload_mass = e.mass;
    }
  }
  latest = -std::numeric_limits<double>::infinity();
  for (const WindEvent& e : wind) {
    if (e.time <= t && e.time >= latest) {
      latest = e.time;
      c.wind = e.load;
    }
  }
  return c;
}

TraceSummary summarize(const Trace& trace) {
  TraceSummary s;
  s.transitions = trace.transitions;
  s.diverged = trace.diverged;
  s.diverged_at = trace.diverged_at;
  if (trace.rows.empty()) {
    return s;
  }
  s.final_mode = trace.rows.back().mode;
  s.min_S_l = s.min_S_b = s.min_S_d = std::numeric_limits<double>::infinity();
  for (const TraceRow& row : trace.rows) {
    s.min_S_l = std::min(s.min_S_l, row.report.S_l);
    s.min_S_b = std::min(s.min_S_b, row.report.S_b);
    s.min_S_d = std::min(s.min_S_d, row.report.S_d);
  }
  return s;
}

Trace run_closed_loop(const Scenario& scenario) {
  scenario.validate();
  const vehicle::VehicleParams& params = scenario.vehicle;
  const double dt = scenario.pipeline.control_dt;
  const int ticks = ratio_steps(scenario.duration, dt, "duration must be a whole multiple of control_dt");
  const int substeps = ratio_steps(dt, scenario.physics_dt, "control_dt must be a whole multiple of physics_dt");
  const double h = dt / substeps;

  control::FlightController controller(params, scenario.gains, scenario.degraded_allocation);
  CpiPipeline pipeline(params, scenario.pipeline);
  Supervisor supervisor(scenario.debounce, scenario.fixed_mode.value_or(Mode::kM1));

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> normal;
  const double scale = 1.0 + scenario.pipeline.estimator.noise_scale;
  const double sd_pos = scenario.pipeline.estimator.meas_noise_pos * scale;
  const double sd_att = scenario.pipeline.estimator.meas_noise_att * scale;

  vehicle::RigidState state;
  state.p = scenario.reference.position;
  state.theta.z() = scenario.reference.psi;

  const control::Allocator hover(vehicle::effectiveness_matrix(params), Eigen::VectorXd::Zero(params.propulsor_count()),
                                 params.max_thrust);
  Eigen::Vector4d hover_wrench(params.weight(), 0.0, 0.0, 0.0);
  Eigen::VectorXd thrust = hover.allocate(hover_wrench).f;

  Trace trace;
  trace.rows.reserve(static_cast<std::size_t>(ticks) + 1);
  bool faults_known = false;
  for (int k = 0; k <= ticks; ++k) {
    const double t = k * dt;
    TraceRow row;
    row.time = t;
    row.state = state;
    for (int i = 0; i < 3; ++i) {
      row.measurement.p(i) = state.p(i) + sd_pos * normal(rng);
    }
    for (int i = 0; i < 3; ++i) {
      row.measurement.theta(i) = state.theta(i) + sd_att * normal(rng);
    }
    row.thrust = thrust;

    const CpiPipeline::Output out = pipeline.step(t, row.measurement, thrust);
    row.estimates = out.reported;
    row.report = out.report;
    if (scenario.fixed_mode) {
      row.mode = *scenario.fixed_mode;
    } else {
      const ModeDecision decision = supervisor.update(out.report, t);
      row.mode = decision.mode;
      row.loc_imminent = decision.loc_imminent;
    }
    trace.rows.push_back(row);
    if (k == ticks) {
      break;
    }

    if (degraded(row.mode) && !faults_known && scenario.degraded_allocation == control::DegradedAllocation::kHealthy) {
      controller.set_failed(scenario.conditions(t).eta);
      faults_known = true;
    }
    const control::ControlCommand cmd =
        controller.update(state, scenario.reference, !lateral_given_up(row.mode), degraded(row.mode), dt);
    thrust = cmd.f;

    try {
      for (int s = 0; s < substeps; ++s) {
        const vehicle::OffNominal cond = scenario.conditions(t + s * h);
        const Eigen::VectorXd delivered = vehicle::delivered_thrust(thrust, cond.eta);
        state = vehicle::step_nonlinear(state, delivered, vehicle::external_load(cond, params), params, h);
      }
    } catch (const vehicle::SimulationDiverged&) {
      trace.diverged = true;
      trace.diverged_at = t + dt;
      break;
    }
  }
  trace.transitions = supervisor.state().transition_log;
  return trace;
}

}  // namespace copter_cpi::supervisor
