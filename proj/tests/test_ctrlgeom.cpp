#include <doctest.h>

#include <cmath>
#include <set>

#include "copter_cpi/ctrlgeom/acai.hpp"
#include "copter_cpi/ctrlgeom/control_set.hpp"
#include "copter_cpi/ctrlgeom/oracle.hpp"
#include "copter_cpi/ctrlgeom/partitions.hpp"
#include "copter_cpi/error.hpp"
#include "copter_cpi/vehicle/params.hpp"
#include "copter_cpi/vehicle/plants.hpp"
#include "support.hpp"

using namespace copter_cpi;
using namespace copter_cpi::ctrlgeom;

TEST_SUITE("ctrlgeom") {
  TEST_CASE("box constraint validation") {
    CHECK_THROWS_AS(BoxConstraint(Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 0)), Error);
    CHECK_THROWS_AS(BoxConstraint(Eigen::Vector2d(0, 0), Eigen::Vector3d(1, 1, 1)), Error);
    CHECK_THROWS_AS(BoxConstraint(Eigen::Vector2d(0, NAN), Eigen::Vector2d(1, 1)), Error);
    const BoxConstraint b = BoxConstraint::symmetric(Eigen::Vector2d(0.5, 2.0));
    CHECK(b.lower(1) == -2.0);
    CHECK(b.midpoint().norm() == 0.0);
    CHECK(b.ranges()(0) == 1.0);
  }

  TEST_CASE("control set shape checks") {
    CHECK_THROWS_AS(ControlSet(Eigen::MatrixXd::Ones(3, 2), BoxConstraint::symmetric(Eigen::Vector2d::Ones())), Error);
    CHECK_THROWS_AS(ControlSet(Eigen::MatrixXd::Ones(2, 3), BoxConstraint::symmetric(Eigen::Vector2d::Ones())), Error);
    const ControlSet deficient(Eigen::MatrixXd::Ones(2, 3), BoxConstraint::symmetric(Eigen::Vector3d::Ones()));
    CHECK(deficient.rank() == 1);
    CHECK_FALSE(deficient.full_rank());
    CHECK_THROWS_WITH_AS(FacetTable{deficient}, doctest::Contains("closed-form inapplicable"), Error);
  }

  TEST_CASE("numerical rank") {
    CHECK(numerical_rank(Eigen::MatrixXd::Identity(4, 6)) == 4);
    Eigen::MatrixXd a(2, 2);
    a << 1, 2, 2, 4;
    CHECK(numerical_rank(a) == 1);
    CHECK(numerical_rank(Eigen::MatrixXd::Zero(3, 3)) == 0);
  }

  TEST_CASE("support function agrees with corner enumeration") {
    testsupport::Gen gen(21);
    for (int trial = 0; trial < 100; ++trial) {
      const Eigen::Index n = gen.integer(1, 4);
      const Eigen::Index m = gen.integer(static_cast<int>(n), 8);
      const ControlSet set = gen.full_rank_set(n, m);
      const auto corners = testsupport::corner_images(set);
      const Eigen::VectorXd g = gen.unit(n);
      CHECK(support_function(set, g) == doctest::Approx(testsupport::support_by_corners(corners, g)).epsilon(1e-12));
    }
  }

  TEST_CASE("partition count and enumeration") {
    for (Eigen::Index n = 1; n <= 5; ++n) {
      for (Eigen::Index m = n; m <= 9; ++m) {
        const double expected = testsupport::factorial(static_cast<int>(m)) /
                                (testsupport::factorial(static_cast<int>(m + 1 - n)) *
                                 testsupport::factorial(static_cast<int>(n - 1)));
        CHECK(static_cast<double>(partition_count(n, m)) == expected);
      }
    }
    testsupport::Gen gen(22);
    const ControlSet set = gen.full_rank_set(3, 6);
    const auto parts = enumerate_partitions(set);
    REQUIRE(parts.size() == 15);
    std::set<std::vector<Eigen::Index>> seen;
    for (const auto& p : parts) {
      CHECK(p.kept.size() == 2);
      CHECK(p.remaining.size() == 4);
      std::set<Eigen::Index> all(p.kept.begin(), p.kept.end());
      all.insert(p.remaining.begin(), p.remaining.end());
      CHECK(all.size() == 6);
      seen.insert(p.kept);
      REQUIRE(p.xi.has_value());
      CHECK(p.xi->norm() == doctest::Approx(1.0).epsilon(1e-12));
      for (Eigen::Index k : p.kept) CHECK(std::abs(p.xi->dot(set.effectiveness().col(k))) < 1e-10);
    }
    CHECK(seen.size() == 15);
    CHECK(partition_count(4, 6) == 20);
  }

  TEST_CASE("parallel kept columns have no normal") {
    Eigen::MatrixXd h(3, 4);
    h << 1, 2, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1;
    const ControlSet set(h, BoxConstraint::symmetric(Eigen::Vector4d::Ones()));
    int absent = 0;
    for (const auto& p : enumerate_partitions(set)) {
      if (!p.xi) {
        ++absent;
        CHECK(p.kept == std::vector<Eigen::Index>{0, 1});
      }
    }
    CHECK(absent == 1);
  }

  TEST_CASE("planar sets match the exact polygon distance") {
    testsupport::Gen gen(23);
    for (int trial = 0; trial < 60; ++trial) {
      const Eigen::Index m = gen.integer(2, 7);
      const ControlSet set = gen.full_rank_set(2, m);
      const FacetTable table(set);
      const testsupport::PolygonOracle poly(set);
      for (int k = 0; k < 30; ++k) {
        const Eigen::VectorXd d = gen.interior_point(set);
        CHECK(table.acai(d).value == doctest::Approx(poly.signed_distance(d)).epsilon(1e-9).scale(1.0));
      }
      const Eigen::VectorXd far = center(set) + 50.0 * gen.unit(2);
      const double rho = table.acai(far).value;
      CHECK(rho < 0.0);
      CHECK(-rho <= -poly.signed_distance(far) + 1e-9);
    }
  }

  TEST_CASE("the inscribed ball touches the set and stays inside it") {
    testsupport::Gen gen(24);
    for (int trial = 0; trial < 40; ++trial) {
      const Eigen::Index n = gen.integer(3, 4);
      const Eigen::Index m = gen.integer(static_cast<int>(n), 8);
      const ControlSet set = gen.full_rank_set(n, m);
      const auto corners = testsupport::corner_images(set);
      const FacetTable table(set);
      const Eigen::VectorXd d = gen.interior_point(set);
      const AcaiResult r = table.acai(d);
      REQUIRE(r.value >= 0.0);
      for (int k = 0; k < 200; ++k) {
        const Eigen::VectorXd g = gen.unit(n);
        CHECK(testsupport::support_by_corners(corners, g) - g.dot(d) >= r.value - 1e-9);
      }
      REQUIRE(r.partition.has_value());
      const auto& xi = table.partitions()[*r.partition].xi;
      REQUIRE(xi.has_value());
      const double up = testsupport::support_by_corners(corners, *xi) - xi->dot(d);
      const double down = testsupport::support_by_corners(corners, -*xi) + xi->dot(d);
      CHECK(std::min(up, down) == doctest::Approx(r.value).epsilon(1e-9));
    }
  }

  TEST_CASE("one-dimensional set is an interval") {
    Eigen::MatrixXd h(1, 3);
    h << 1.0, 2.0, -1.0;
    const ControlSet set(h, BoxConstraint(Eigen::Vector3d(0, 0, 0), Eigen::Vector3d(1, 1, 1)));
    const FacetTable table(set);
    CHECK(table.max_acai() == doctest::Approx(2.0));
    CHECK(table.acai(Eigen::VectorXd::Constant(1, 2.5)).value == doctest::Approx(0.5));
    CHECK(table.acai(Eigen::VectorXd::Constant(1, -1.5)).value == doctest::Approx(-0.5));
  }

  TEST_CASE("maximum is attained at the center and bounds every point") {
    testsupport::Gen gen(25);
    for (int trial = 0; trial < 20; ++trial) {
      const Eigen::Index n = gen.integer(2, 4);
      const ControlSet set = gen.full_rank_set(n, gen.integer(static_cast<int>(n), 7));
      const FacetTable table(set);
      CHECK(std::abs(table.acai(center(set)).value - table.max_acai()) <= 1e-12);
      for (int k = 0; k < 100; ++k) {
        const Eigen::VectorXd d = center(set) + gen.uniform(0.0, 3.0) * gen.unit(n);
        CHECK(table.acai(d).value <= table.max_acai() + 1e-12);
      }
    }
  }

  TEST_CASE("batch evaluation equals pointwise evaluation") {
    testsupport::Gen gen(26);
    const ControlSet set = gen.full_rank_set(4, 6);
    const FacetTable table(set);
    Eigen::MatrixXd pts(13, 4);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) pts.row(i) = gen.vector(4, -2, 2).transpose();
    std::vector<double> out(13);
    table.acai_batch(pts, out);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) CHECK(out[static_cast<std::size_t>(i)] == table.acai(Eigen::VectorXd(pts.row(i).transpose())).value);
    CHECK_THROWS_AS(table.acai(Eigen::VectorXd::Zero(3)), Error);
  }

  TEST_CASE("scalar and avx2 tables agree") {
    if (!kernels::isa_available(kernels::Isa::kAvx2)) return;
    testsupport::Gen gen(27);
    for (int trial = 0; trial < 20; ++trial) {
      const ControlSet set = gen.full_rank_set(4, gen.integer(4, 8));
      const FacetTable s(set, kernels::Isa::kScalar), v(set, kernels::Isa::kAvx2);
      for (int k = 0; k < 50; ++k) {
        const Eigen::VectorXd d = gen.vector(4, -2, 2);
        CHECK(s.acai(d).value == v.acai(d).value);
        CHECK(s.acai(d).partition == v.acai(d).partition);
      }
    }
  }

  TEST_CASE("oracle bounds the closed form from above") {
    testsupport::Gen gen(28);
    for (int trial = 0; trial < 10; ++trial) {
      const Eigen::Index n = gen.integer(2, 4);
      const ControlSet set = gen.full_rank_set(n, gen.integer(static_cast<int>(n), 7));
      const Eigen::VectorXd d = gen.interior_point(set);
      const double rho = acai(set, d);
      const double o = acai_oracle(set, d, 20000, static_cast<std::uint64_t>(trial));
      CHECK(o >= rho - 1e-9);
      CHECK(o - rho <= 0.02 * max_acai(set));
    }
  }

  TEST_CASE("oracle is deterministic for a seed") {
    testsupport::Gen gen(29);
    const ControlSet set = gen.full_rank_set(3, 5);
    const Eigen::VectorXd d = gen.interior_point(set);
    CHECK(acai_oracle(set, d, 5000, 3) == acai_oracle(set, d, 5000, 3));
  }

  TEST_CASE("hexacopter hover lump") {
    const auto params = vehicle::default_hexacopter();
    const auto plant = vehicle::basic_plant(params);
    const FacetTable table(plant.control_set());
    CHECK(table.facet_count() > 0);
    CHECK(table.partitions().size() == 20);
    const double rho = table.acai(plant.d_nominal).value;
    CHECK(rho > 0.0);
    CHECK(rho <= table.max_acai());
  }
}
