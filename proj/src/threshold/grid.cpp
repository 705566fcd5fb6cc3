#include "copter_cpi/threshold/grid.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "copter_cpi/error.hpp"

namespace copter_cpi::threshold {

DisturbanceGrid::DisturbanceGrid(Eigen::VectorXd lower, Eigen::VectorXd upper, int nd, std::size_t cap)
    : lower_(std::move(lower)), upper_(std::move(upper)), nd_(nd), size_(1) {
  if (nd < 2) {
    throw Error("grid: nd must be at least 2");
  }
  if (lower_.size() != upper_.size() || lower_.size() == 0) {
    throw Error("grid: bounds must be non-empty and of equal length");
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_(i)) || !std::isfinite(upper_(i)) || lower_(i) > upper_(i)) {
      throw Error("grid: invalid bounds on axis " + std::to_string(i));
    }
  }
  for (Eigen::Index i = 0; i < lower_.size(); ++i) {
    if (size_ > cap / static_cast<std::size_t>(nd)) {
      throw Error("grid too large: nd^n exceeds the cap of " + std::to_string(cap) + " points");
    }
    size_ *= static_cast<std::size_t>(nd);
  }
  if (size_ > cap) {
    throw Error("grid too large: nd^n exceeds the cap of " + std::to_string(cap) + " points");
  }
}

double DisturbanceGrid::coordinate(Eigen::Index axis, int step) const {
  if (step == nd_ - 1) {
    return upper_(axis);
  }
  return lower_(axis) + (upper_(axis) - lower_(axis)) * step / (nd_ - 1);
}

Eigen::VectorXd DisturbanceGrid::point(std::size_t index) const {
  if (index >= size_) {
    throw Error("grid: index out of range");
  }
  Eigen::VectorXd p(dim());
  for (Eigen::Index axis = dim() - 1; axis >= 0; --axis) {
    p(axis) = coordinate(axis, static_cast<int>(index % static_cast<std::size_t>(nd_)));
    index /= static_cast<std::size_t>(nd_);
  }
  return p;
}

Eigen::MatrixXd DisturbanceGrid::rows(std::size_t begin, std::size_t count) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(count), dim());
  for (std::size_t i = 0; i < count; ++i) {
    out.row(static_cast<Eigen::Index>(i)) = point(begin + i).transpose();
  }
  return out;
}

DisturbanceGrid make_grid(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, int nd, std::size_t cap) {
  return DisturbanceGrid(lower, upper, nd, cap);
}

GridBounds default_bounds(vehicle::Subsystem subsystem, const vehicle::VehicleParams& params) {
  GridBounds b;
  if (subsystem == vehicle::Subsystem::kLateral) {
    const double f = 1.5 * params.weight() * std::max(params.phi_max, params.theta_max);
    b.lower = Eigen::Vector2d::Constant(-f);
    b.upper = Eigen::Vector2d::Constant(f);
    return b;
  }
  const Eigen::MatrixXd bf = vehicle::effectiveness_matrix(params);
  const Eigen::Index n = subsystem == vehicle::Subsystem::kBasic ? 4 : 3;
  b.lower.resize(n);
  b.upper.resize(n);
  b.lower(0) = 0.0;
  b.upper(0) = 2.0 * params.weight();
  for (Eigen::Index r = 1; r < n; ++r) {
    const double pos = bf.row(r).cwiseMax(0.0).dot(params.max_thrust);
    const double neg = (-bf.row(r)).cwiseMax(0.0).dot(params.max_thrust);
    const double reach = std::max(pos, neg);
    b.lower(r) = -reach;
    b.upper(r) = reach;
  }
  return b;
}

std::size_t default_workers() {
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  const std::size_t chunk = std::max<std::size_t>(1, count / (workers * 8));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) {
        return;
      }
      const std::size_t end = std::min(count, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) {
          fn(i);
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back(work);
  }
  for (std::thread& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

std::vector<double> doc_over_grid(const ctrlgeom::FacetTable& table, const DisturbanceGrid& grid,
                                  std::size_t workers) {
  if (grid.dim() != table.dim()) {
    throw Error("doc_over_grid: grid and control set dimensions differ");
  }
  constexpr std::size_t kBlock = 4096;
  std::vector<double> sigma(grid.size());
  const std::size_t blocks = (grid.size() + kBlock - 1) / kBlock;
  const double max_acai = table.max_acai();
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t begin = b * kBlock;
    const std::size_t count = std::min(kBlock, grid.size() - begin);
    const Eigen::MatrixXd points = grid.rows(begin, count);
    std::span<double> out(sigma.data() + begin, count);
    table.acai_batch(points, out);
    for (double& v : out) {
      v = v > 0.0 ? std::min(v / max_acai, 1.0) : 0.0;
    }
  });
  return sigma;
}

std::vector<double> doc_over_grid(const ctrlgeom::ControlSet& set, const DisturbanceGrid& grid, std::size_t workers) {
  return doc_over_grid(ctrlgeom::FacetTable(set), grid, workers);
}

}  // namespace copter_cpi::threshold
