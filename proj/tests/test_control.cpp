#include <doctest.h>

#include <cmath>

#include "copter_cpi/control/allocation.hpp"
#include "copter_cpi/control/controller.hpp"
#include "copter_cpi/control/pid.hpp"
#include "copter_cpi/error.hpp"
#include "copter_cpi/vehicle/disturbance.hpp"
#include "copter_cpi/vehicle/dynamics.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "support.hpp"

using namespace copter_cpi;
using namespace copter_cpi::control;

namespace {

// Control at 100 Hz, physics at 500 Hz, optional propulsor loss.
template <typename Observe>
vehicle::RigidState fly(FlightController& c, vehicle::RigidState s, const Reference& ref, bool degraded_mode,
                        const Eigen::VectorXd& eta, double seconds, Observe&& observe) {
  const auto& p = c.params();
  const int ticks = static_cast<int>(std::lround(seconds / 0.01));
  for (int k = 0; k < ticks; ++k) {
    const ControlCommand cmd = c.update(s, ref, false, degraded_mode, 0.01);
    observe(k * 0.01, s, cmd);
    const Eigen::VectorXd f = vehicle::delivered_thrust(cmd.f, eta);
    for (int i = 0; i < 5; ++i) s = vehicle::step_nonlinear(s, f, {}, p, 0.002);
  }
  return s;
}

}  // namespace

TEST_SUITE("control") {
  TEST_CASE("pid terms and anti-windup") {
    Pid pid(PidGains{2.0, 1.0, 0.5, -10.0, 10.0});
    CHECK(pid.update(1.0, 0.0, 0.1) == doctest::Approx(2.0 + 0.1));
    CHECK(pid.integral() == doctest::Approx(0.1));
    CHECK(pid.update(0.0, 2.0, 0.1) == doctest::Approx(0.1 + 1.0));
    pid.reset();
    for (int k = 0; k < 1000; ++k) pid.update(100.0, 0.0, 0.1);
    CHECK(pid.integral() < 1.0);
    CHECK(pid.update(100.0, 0.0, 0.1) == 10.0);
    CHECK_THROWS_AS((PidGains{1.0, 0.0, 0.0, 1.0, -1.0}.validate()), Error);
    CHECK_THROWS_AS((PidGains{NAN, 0.0, 0.0}.validate()), Error);
  }

  TEST_CASE("symmetric hover allocation") {
    const auto p = vehicle::default_hexacopter();
    const Allocator a(vehicle::effectiveness_matrix(p), Eigen::VectorXd::Zero(6), p.max_thrust);
    const AllocationResult r = a.allocate(Eigen::Vector4d(p.weight(), 0, 0, 0));
    CHECK_FALSE(r.saturated);
    for (Eigen::Index i = 0; i < 6; ++i) CHECK(r.f(i) == doctest::Approx(p.weight() / 6.0));
    const AllocationResult z = a.allocate(Eigen::Vector4d::Zero());
    CHECK(z.f.norm() < 1e-15);
    CHECK_FALSE(z.saturated);
    CHECK_THROWS_AS(a.allocate(Eigen::Vector3d::Zero()), Error);
  }

  TEST_CASE("unclipped allocations are exact and clipped ones are reported") {
    testsupport::Gen gen(71);
    const auto p = vehicle::default_hexacopter();
    const Eigen::MatrixXd bf = vehicle::effectiveness_matrix(p);
    const Allocator a(bf, Eigen::VectorXd::Zero(6), p.max_thrust);
    int exact = 0, clipped = 0;
    for (int k = 0; k < 500; ++k) {
      const Eigen::VectorXd f = gen.vector(6, -1.0, 7.0);
      const Eigen::VectorXd u = bf * f;
      const AllocationResult r = a.allocate(u);
      CHECK((r.achieved - bf * r.f).norm() < 1e-12);
      CHECK((r.f.array() >= 0.0).all());
      CHECK((r.f.array() <= p.max_thrust.array()).all());
      if (r.saturated) {
        ++clipped;
      } else {
        ++exact;
        CHECK((r.achieved - u).norm() < 1e-9);
      }
    }
    CHECK(exact > 0);
    CHECK(clipped > 0);
    CHECK_THROWS_AS(Allocator(Eigen::MatrixXd::Ones(2, 4), Eigen::VectorXd::Zero(4), Eigen::VectorXd::Ones(4)), Error);
  }

  TEST_CASE("secondary row is zeroed without disturbing the primary rows") {
    testsupport::Gen gen(72);
    for (int trial = 0; trial < 50; ++trial) {
      const Eigen::MatrixXd h = gen.matrix(3, 6, -1.0, 1.0);
      const Eigen::RowVectorXd b = gen.matrix(1, 6, -1.0, 1.0);
      const Allocator a(h, b, Eigen::VectorXd::Constant(6, -100.0), Eigen::VectorXd::Constant(6, 100.0));
      const Eigen::VectorXd u = gen.vector(3, -1.0, 1.0);
      const AllocationResult r = a.allocate(u);
      CHECK((h * r.f - u).norm() < 1e-9);
      CHECK(std::abs(b.dot(r.f)) < 1e-9);
    }
  }

  TEST_CASE("hexacopter with one propulsor out hovers without yaw torque") {
    const auto p = vehicle::default_hexacopter();
    const Eigen::MatrixXd bf = vehicle::effectiveness_matrix(p);
    Eigen::VectorXd usable = Eigen::VectorXd::Ones(6);
    usable(1) = 0.0;
    const Allocator a(bf.topRows(3) * usable.asDiagonal(), bf.row(3) * usable.asDiagonal(), Eigen::VectorXd::Zero(6),
                      p.max_thrust);
    const AllocationResult r = a.allocate(Eigen::Vector3d(p.weight(), 0, 0));
    CHECK(r.f(1) == 0.0);
    CHECK(r.f(4) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    for (Eigen::Index i : {0, 2, 3, 5}) CHECK(r.f(i) == doctest::Approx(p.weight() / 4.0));
    CHECK(std::abs((bf * r.f)(3)) < 1e-9);
  }

  TEST_CASE("hover command at equilibrium") {
    const auto p = vehicle::default_hexacopter();
    FlightController c(p, ControllerGains{});
    vehicle::RigidState s;
    s.p.z() = 1.0;
    const ControlCommand cmd = nominal_control(c, s, Reference{}, 0.01);
    CHECK(cmd.u_t == doctest::Approx(p.weight()));
    CHECK(cmd.u_tau.norm() < 1e-12);
    CHECK_FALSE(cmd.saturated);
    CHECK((cmd.achieved - Eigen::Vector4d(p.weight(), 0, 0, 0)).norm() < 1e-9);
  }

  TEST_CASE("roll step settles within two seconds") {
    const auto p = vehicle::default_quad();
    FlightController c(p, ControllerGains{});
    vehicle::RigidState s;
    s.p.z() = 1.0;
    s.theta.x() = -0.1;
    double overshoot = 0.0;
    double settled = -1.0;
    fly(c, s, Reference{}, false, Eigen::VectorXd::Zero(4), 4.0,
        [&](double t, const vehicle::RigidState& st, const ControlCommand&) {
          overshoot = std::max(overshoot, st.theta.x());
          if (std::abs(st.theta.x()) < 0.01) {
            if (settled < 0.0) settled = t;
          } else {
            settled = -1.0;
          }
        });
    REQUIRE(settled >= 0.0);
    CHECK(settled < 2.0);
    CHECK(overshoot < 0.03);
  }

  TEST_CASE("altitude climbs to the reference") {
    const auto p = vehicle::default_hexacopter();
    FlightController c(p, ControllerGains{});
    vehicle::RigidState s;
    s.p.z() = 0.5;
    const vehicle::RigidState end = fly(c, s, Reference{}, false, Eigen::VectorXd::Zero(6), 10.0,
                                        [](double, const vehicle::RigidState&, const ControlCommand&) {});
    CHECK(std::abs(end.p.z() - 1.0) < 0.05);
    CHECK(end.theta.head<2>().norm() < 1e-6);
  }

  TEST_CASE("degraded control holds altitude after a propulsor loss") {
    const auto p = vehicle::default_hexacopter();
    FlightController c(p, ControllerGains{});
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(6);
    eta(1) = 1.0;
    c.set_failed(eta);
    vehicle::RigidState s;
    s.p.z() = 1.0;
    double worst_tilt = 0.0;
    bool yaw_free = true;
    const vehicle::RigidState end =
        fly(c, s, Reference{}, true, eta, 10.0, [&](double, const vehicle::RigidState& st, const ControlCommand& cmd) {
          worst_tilt = std::max(worst_tilt, st.theta.head<2>().cwiseAbs().maxCoeff());
          yaw_free = yaw_free && cmd.u_tau.z() == 0.0 && cmd.f(1) == 0.0;
        });
    CHECK(std::abs(end.p.z() - 1.0) < 0.3);
    CHECK(worst_tilt < 0.3);
    CHECK(yaw_free);
    CHECK(std::abs(end.omega.z()) < 20.0);
  }

  TEST_CASE("losing opposite quad propulsors is unrecoverable") {
    const auto p = vehicle::default_quad();
    FlightController c(p, ControllerGains{});
    Eigen::VectorXd eta = Eigen::VectorXd::Zero(4);
    eta(0) = 1.0;
    eta(2) = 1.0;
    CHECK_THROWS_WITH_AS(c.set_failed(eta), doctest::Contains("unrecoverable"), Error);
    CHECK_THROWS_AS(c.set_failed(Eigen::VectorXd::Zero(6)), Error);
    eta(2) = 0.0;
    CHECK_NOTHROW(c.set_failed(eta));
  }

  TEST_CASE("gain validation") {
    ControllerGains g;
    CHECK_NOTHROW(g.validate());
    g.tilt_leak = -1.0;
    CHECK_THROWS_AS(g.validate(), Error);
  }
}
