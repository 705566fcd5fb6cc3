#include <doctest.h>

#include <cmath>
#include <numbers>

#include "copter_cpi/ctrlgeom/acai.hpp"
#include "copter_cpi/error.hpp"
#include "copter_cpi/perf/perf.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "copter_cpi/vehicle/plants.hpp"
#include "support.hpp"

using namespace copter_cpi;
using namespace copter_cpi::perf;

TEST_SUITE("perf") {
  TEST_CASE("cpi algebra") {
    CHECK(cpi(0.4, 0.4) == 0.0);
    CHECK(cpi(1.0, 0.4) == 1.0);
    CHECK(cpi(0.0, 0.4) == doctest::Approx(-2.0 / 3.0).epsilon(1e-15));
    CHECK(cpi_floor(0.4) == cpi(0.0, 0.4));
    CHECK(cpi(0.7, 0.0) == 0.7);
    CHECK_THROWS_AS(cpi(0.5, 1.0), Error);
    CHECK_THROWS_AS(cpi(0.5, 1.5), Error);
  }

  TEST_CASE("cpi is affine and increasing") {
    testsupport::Gen gen(51);
    for (int k = 0; k < 1000; ++k) {
      const double th = gen.uniform(0.0, 0.95);
      const double a = gen.uniform(0.0, 1.0);
      const double b = gen.uniform(0.0, 1.0);
      const double t = gen.uniform(0.0, 1.0);
      CHECK(cpi(t * a + (1 - t) * b, th) == doctest::Approx(t * cpi(a, th) + (1 - t) * cpi(b, th)).epsilon(1e-12));
      if (a < b) CHECK(cpi(a, th) < cpi(b, th));
    }
  }

  TEST_CASE("doc lies in the unit interval and S above its floor") {
    testsupport::Gen gen(52);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = gen.integer(2, 4);
      const auto set = gen.full_rank_set(n, gen.integer(static_cast<int>(n), 7));
      const ctrlgeom::FacetTable table(set);
      const double th = gen.uniform(0.0, 0.9);
      for (int k = 0; k < 100; ++k) {
        const Eigen::VectorXd d = ctrlgeom::center(set) + gen.uniform(0.0, 4.0) * gen.unit(n);
        const double s = doc(table, d);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        const double S = cpi(s, th);
        CHECK(S >= cpi_floor(th) - 1e-15);
        CHECK(S <= 1.0 + 1e-15);
      }
      CHECK(doc(table, ctrlgeom::center(set)) == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  TEST_CASE("lateral maximum margin has a closed form") {
    testsupport::Gen gen(53);
    for (int k = 0; k < 50; ++k) {
      vehicle::VehicleParams p = vehicle::default_quad();
      p.mass = gen.uniform(0.3, 5.0);
      p.gravity = gen.uniform(9.0, 10.0);
      p.phi_max = gen.uniform(0.05, 1.2);
      p.theta_max = gen.uniform(0.05, 1.2);
      const double psi = gen.uniform(-std::numbers::pi, std::numbers::pi);
      const auto plant = vehicle::lateral_plant(p, psi);
      const double expected = p.mass * p.gravity * std::min(p.phi_max, p.theta_max);
      CHECK(std::abs(ctrlgeom::max_acai(plant.control_set()) - expected) < 1e-9);
    }
  }

  TEST_CASE("threshold set") {
    ThresholdSet t;
    CHECK_NOTHROW(t.validate());
    CHECK(t.for_subsystem(vehicle::Subsystem::kLateral) == t.sigma_th_lateral);
    t.sigma_th_basic = 1.0;
    CHECK_THROWS_AS(t.validate(), Error);
    t = ThresholdSet{};
    t.confidence = -0.1;
    CHECK_THROWS_AS(t.validate(), Error);
  }

  TEST_CASE("monitor matches the free function and rotates to heading") {
    const auto p = vehicle::default_hexacopter();
    const ThresholdSet th;
    const CpiMonitor monitor(p, 0.0, th);
    testsupport::Gen gen(54);
    for (int k = 0; k < 30; ++k) {
      SubsystemEstimates e;
      e.lateral = gen.vector(2, -5.0, 5.0);
      e.basic = vehicle::basic_plant(p).d_nominal + gen.vector(4, -2.0, 2.0).cwiseProduct(Eigen::Vector4d(1, 0.05, 0.05, 0.05));
      e.degraded = e.basic.head(3);
      const double psi = gen.uniform(-3.0, 3.0);
      const CpiReport a = monitor.assess(e, 1.0, psi);
      const CpiReport b = assess(vehicle::lateral_plant(p, psi), vehicle::basic_plant(p), vehicle::degraded_plant(p), e, th, 1.0);
      CHECK(a.sigma_l == doctest::Approx(b.sigma_l).epsilon(1e-12));
      CHECK(a.S_b == doctest::Approx(b.S_b).epsilon(1e-12));
      CHECK(a.S_d == doctest::Approx(b.S_d).epsilon(1e-12));
      CHECK(a.safe_b == (a.S_b >= 0.0));
      CHECK(a.timestamp == 1.0);
    }
  }

  TEST_CASE("payload lowers the basic index") {
    const auto p = vehicle::default_hexacopter();
    const CpiMonitor monitor(p, 0.0, ThresholdSet{});
    SubsystemEstimates e;
    e.lateral = Eigen::Vector2d::Zero();
    e.basic = vehicle::basic_plant(p).d_nominal;
    e.degraded = e.basic.head(3);
    const double before = monitor.assess(e, 0.0).S_b;
    e.basic(0) += 2.0 * p.gravity;
    e.degraded(0) += 2.0 * p.gravity;
    CHECK(monitor.assess(e, 0.0).S_b < before);
  }
}
