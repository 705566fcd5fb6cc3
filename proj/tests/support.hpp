#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "copter_cpi/ctrlgeom/control_set.hpp"

namespace testsupport {

// Hand-rolled generators for property tests. Everything is seeded so a
// failing case reproduces from the seed printed by the test.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  Eigen::VectorXd vector(Eigen::Index n, double lo, double hi) {
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = uniform(lo, hi);
    return v;
  }

  Eigen::MatrixXd matrix(Eigen::Index rows, Eigen::Index cols, double lo, double hi) {
    Eigen::MatrixXd a(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i) a(i, j) = uniform(lo, hi);
    return a;
  }

  Eigen::VectorXd unit(Eigen::Index n) {
    Eigen::VectorXd v(n);
    do {
      for (Eigen::Index i = 0; i < n; ++i) v(i) = normal();
    } while (v.norm() < 1e-6);
    return v.normalized();
  }

  // Random well-conditioned full-rank set with a non-degenerate box.
  copter_cpi::ctrlgeom::ControlSet full_rank_set(Eigen::Index n, Eigen::Index m) {
    for (;;) {
      Eigen::MatrixXd h = matrix(n, m, -1.0, 1.0);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(h);
      if (svd.singularValues()(n - 1) < 0.15) continue;
      Eigen::VectorXd lower = vector(m, -1.0, 0.5);
      Eigen::VectorXd upper = lower + vector(m, 0.2, 2.0);
      return copter_cpi::ctrlgeom::ControlSet(h, copter_cpi::ctrlgeom::BoxConstraint(lower, upper));
    }
  }

  // H mu for mu uniform in the box, so always inside the set.
  Eigen::VectorXd interior_point(const copter_cpi::ctrlgeom::ControlSet& set) {
    const auto& box = set.box();
    Eigen::VectorXd mu(box.size());
    for (Eigen::Index i = 0; i < box.size(); ++i) mu(i) = uniform(box.lower(i), box.upper(i));
    return set.effectiveness() * mu;
  }

 private:
  std::mt19937_64 rng_;
};

// Images of all box corners. The set is their convex hull.
inline std::vector<Eigen::VectorXd> corner_images(const copter_cpi::ctrlgeom::ControlSet& set) {
  const Eigen::Index m = set.inputs();
  std::vector<Eigen::VectorXd> out;
  out.reserve(std::size_t{1} << m);
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    Eigen::VectorXd mu(m);
    for (Eigen::Index i = 0; i < m; ++i) mu(i) = (mask >> i) & 1 ? set.box().upper(i) : set.box().lower(i);
    out.push_back(set.effectiveness() * mu);
  }
  return out;
}

inline double support_by_corners(const std::vector<Eigen::VectorXd>& corners, const Eigen::VectorXd& g) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : corners) best = std::max(best, g.dot(v));
  return best;
}

// Exact signed distance to the boundary of a planar set, from the convex hull
// of its corner images (monotone chain).
class PolygonOracle {
 public:
  explicit PolygonOracle(const copter_cpi::ctrlgeom::ControlSet& set) {
    std::vector<Eigen::Vector2d> pts;
    for (const auto& v : corner_images(set)) pts.emplace_back(v(0), v(1));
    std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
      return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
      return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
    };
    std::vector<Eigen::Vector2d> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
      while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 1e-12) --k;
      hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
      while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 1e-12) --k;
      hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    hull_ = hull;
  }

  double signed_distance(const Eigen::Vector2d& p) const {
    bool inside = true;
    double edge_min = std::numeric_limits<double>::infinity();
    double seg_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull_.size(); ++i) {
      const Eigen::Vector2d a = hull_[i];
      const Eigen::Vector2d b = hull_[(i + 1) % hull_.size()];
      const Eigen::Vector2d e = b - a;
      const Eigen::Vector2d inward(-e.y(), e.x());
      const double h = inward.normalized().dot(p - a);
      if (h < 0.0) inside = false;
      edge_min = std::min(edge_min, h);
      const double t = std::clamp((p - a).dot(e) / e.squaredNorm(), 0.0, 1.0);
      seg_min = std::min(seg_min, (a + t * e - p).norm());
    }
    return inside ? edge_min : -seg_min;
  }

  const std::vector<Eigen::Vector2d>& hull() const { return hull_; }

 private:
  std::vector<Eigen::Vector2d> hull_;
};

inline double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

}  // namespace testsupport
