#include <doctest.h>

#include "copter_cpi/error.hpp"
#include "copter_cpi/supervisor/closed_loop.hpp"
#include "copter_cpi/supervisor/pipeline.hpp"
#include "copter_cpi/supervisor/supervisor.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "support.hpp"

using namespace copter_cpi;
using namespace copter_cpi::supervisor;

namespace {

perf::CpiReport report(double sl, double sb, double sd) {
  perf::CpiReport r;
  r.S_l = sl;
  r.S_b = sb;
  r.S_d = sd;
  return r;
}

Scenario short_scenario(double duration) {
  Scenario s;
  s.name = "test";
  s.vehicle = vehicle::default_hexacopter();
  s.duration = duration;
  s.seed = 5;
  return s;
}

}  // namespace

TEST_SUITE("supervisor") {
  TEST_CASE("mode algebra") {
    CHECK(make_mode(false, false) == Mode::kM1);
    CHECK(make_mode(true, false) == Mode::kM2);
    CHECK(make_mode(false, true) == Mode::kM3);
    CHECK(make_mode(true, true) == Mode::kM4);
    CHECK(join(Mode::kM2, Mode::kM3) == Mode::kM4);
    CHECK(join(Mode::kM3, Mode::kM1) == Mode::kM3);
    CHECK(reachable(Mode::kM1, Mode::kM4));
    CHECK(reachable(Mode::kM2, Mode::kM4));
    CHECK_FALSE(reachable(Mode::kM2, Mode::kM3));
    CHECK_FALSE(reachable(Mode::kM3, Mode::kM1));
    CHECK_FALSE(reachable(Mode::kM4, Mode::kM2));
    for (Mode m : {Mode::kM1, Mode::kM2, Mode::kM3, Mode::kM4}) CHECK(parse_mode(mode_name(m)) == m);
    CHECK_THROWS_AS(parse_mode("M5"), Error);
  }

  TEST_CASE("target mode") {
    CHECK(target_mode(report(0.5, 0.5, 0.5)) == Mode::kM1);
    CHECK(target_mode(report(-0.1, 0.5, 0.5)) == Mode::kM2);
    CHECK(target_mode(report(0.5, -0.1, 0.5)) == Mode::kM3);
    CHECK(target_mode(report(0.0, 0.0, 0.5)) == Mode::kM4);
  }

  TEST_CASE("debounce needs consecutive reports") {
    DebounceState db;
    Mode m = Mode::kM1;
    for (int k = 0; k < 4; ++k) m = next_mode(m, report(0.5, -0.2, 0.3), db, 5).mode;
    CHECK(m == Mode::kM1);
    m = next_mode(m, report(0.5, 0.2, 0.3), db, 5).mode;
    CHECK(db.count == 0);
    for (int k = 0; k < 4; ++k) m = next_mode(m, report(0.5, -0.2, 0.3), db, 5).mode;
    CHECK(m == Mode::kM1);
    m = next_mode(m, report(0.5, -0.2, 0.3), db, 5).mode;
    CHECK(m == Mode::kM3);
    CHECK(next_mode(Mode::kM3, report(0.5, 0.5, 0.5), db, 5).mode == Mode::kM3);
  }

  TEST_CASE("imminent loss of control") {
    DebounceState db;
    CHECK(next_mode(Mode::kM1, report(0.5, -0.2, -0.1), db, 5).loc_imminent);
    CHECK_FALSE(next_mode(Mode::kM1, report(0.5, -0.2, 0.1), db, 5).loc_imminent);
    CHECK_FALSE(next_mode(Mode::kM1, report(0.5, 0.2, -0.1), db, 5).loc_imminent);
  }

  TEST_CASE("switching is unidirectional for any report sequence") {
    testsupport::Gen gen(81);
    for (int trial = 0; trial < 300; ++trial) {
      const int required = gen.integer(1, 6);
      Supervisor sup(required);
      Mode prev = sup.mode();
      for (int k = 0; k < 200; ++k) {
        const perf::CpiReport r = report(gen.uniform(-1, 1), gen.uniform(-0.3, 1), gen.uniform(-1, 1));
        const Mode m = sup.update(r, k * 0.01).mode;
        CHECK((m == prev || reachable(prev, m)));
        prev = m;
      }
      const auto& log = sup.state().transition_log;
      CHECK(log.size() <= 2);
      for (const auto& t : log) {
        CHECK(t.from != t.to);
        CHECK(reachable(t.from, t.to));
      }
    }
    CHECK_THROWS_AS(Supervisor(0), Error);
  }

  TEST_CASE("nominal flight stays in the first mode") {
    const Trace trace = run_closed_loop(short_scenario(5.0));
    const TraceSummary s = summarize(trace);
    CHECK(s.transitions.empty());
    CHECK(s.final_mode == Mode::kM1);
    CHECK_FALSE(s.diverged);
    CHECK(s.min_S_b > 0.0);
    CHECK(s.min_S_d > 0.0);
    CHECK(trace.rows.size() == 501);
  }

  TEST_CASE("propulsor loss switches to degraded control") {
    Scenario sc = short_scenario(8.0);
    sc.fault.eta = Eigen::VectorXd::Zero(6);
    sc.fault.eta(1) = 1.0;
    sc.fault.onset_time = 2.0;
    const Trace trace = run_closed_loop(sc);
    REQUIRE(trace.transitions.size() == 1);
    CHECK(trace.transitions[0].from == Mode::kM1);
    CHECK(trace.transitions[0].to == Mode::kM3);
    CHECK(trace.transitions[0].time > 2.0);
    CHECK(trace.transitions[0].time < 3.0 + sc.debounce * sc.pipeline.control_dt);
    CHECK_FALSE(trace.diverged);
    CHECK(std::abs(trace.rows.back().state.p.z() - 1.0) < 0.3);
  }

  TEST_CASE("fixed mode never switches") {
    Scenario sc = short_scenario(3.0);
    sc.fixed_mode = Mode::kM2;
    const Trace trace = run_closed_loop(sc);
    CHECK(trace.transitions.empty());
    for (const auto& row : trace.rows) CHECK(row.mode == Mode::kM2);
  }

  TEST_CASE("equal seeds give equal traces") {
    const Trace a = run_closed_loop(short_scenario(2.0));
    const Trace b = run_closed_loop(short_scenario(2.0));
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].measurement.p == b.rows[i].measurement.p);
      CHECK(a.rows[i].report.S_b == b.rows[i].report.S_b);
    }
  }

  TEST_CASE("scenario validation") {
    Scenario sc = short_scenario(3.0);
    sc.fault.eta = Eigen::VectorXd::Zero(6);
    sc.fault.onset_time = 5.0;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = short_scenario(3.0);
    sc.payload.push_back(PayloadEvent{4.0, 0.1});
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = short_scenario(3.0);
    sc.debounce = 0;
    CHECK_THROWS_AS(sc.validate(), Error);
    sc = short_scenario(3.0);
    sc.fault.eta = Eigen::VectorXd::Zero(4);
    CHECK_THROWS_AS(sc.validate(), Error);
  }

  TEST_CASE("scenario conditions pick the latest event") {
    Scenario sc = short_scenario(10.0);
    sc.payload = {PayloadEvent{1.0, 0.1}, PayloadEvent{3.0, 0.2}};
    CHECK(sc.conditions(0.5).payload_mass == 0.0);
    CHECK(sc.conditions(2.0).payload_mass == 0.1);
    CHECK(sc.conditions(3.0).payload_mass == 0.2);
  }

  TEST_CASE("pipeline rejects what the trace cannot feed") {
    PipelineConfig cfg;
    cfg.estimator.full_state = true;
    CHECK_THROWS_AS(CpiPipeline(vehicle::default_hexacopter(), cfg), Error);
    CpiPipeline ok(vehicle::default_hexacopter(), PipelineConfig{});
    CHECK_THROWS_AS(ok.step(0.0, Measurement{}, Eigen::VectorXd::Zero(4)), Error);
  }
}
