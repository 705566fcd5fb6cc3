#include "copter_cpi/ctrlgeom/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "copter_cpi/error.hpp"

namespace copter_cpi::ctrlgeom {

namespace {

struct Candidate {
  double value;
  Eigen::VectorXd direction;
};

class GapEvaluator {
 public:
  GapEvaluator(const ControlSet& set, const Eigen::VectorXd& d, kernels::Isa isa)
      : generators_(set.effectiveness()),
        half_range_(0.5 * set.box().ranges()),
        shift_(center(set) - d),
        isa_(isa) {}

  // Rows of `directions` are unit vectors.
  void evaluate(const Eigen::MatrixXd& directions, std::vector<double>& out) const {
    const auto count = static_cast<std::size_t>(directions.rows());
    out.resize(count);
    const kernels::ZonotopeView zono{generators_.data(), half_range_.data(),
                                     static_cast<std::size_t>(generators_.rows()),
                                     static_cast<std::size_t>(generators_.cols())};
    const kernels::SoaView soa{directions.data(), static_cast<std::size_t>(directions.cols()), count,
                               count};
    kernels::support_gap(isa_, zono, std::span<const double>(shift_.data(), shift_.size()), soa, out);
  }

 private:
  Eigen::MatrixXd generators_;
  Eigen::VectorXd half_range_;
  Eigen::VectorXd shift_;
  kernels::Isa isa_;
};

void keep_best(std::vector<Candidate>& best, std::size_t limit, double value,
               const Eigen::VectorXd& direction) {
  if (best.size() == limit && !(value < best.back().value)) {
    return;
  }
  auto pos = std::upper_bound(best.begin(), best.end(), value,
                              [](double v, const Candidate& c) { return v < c.value; });
  best.insert(pos, Candidate{value, direction});
  if (best.size() > limit) {
    best.pop_back();
  }
}

// Random search in a cone around the incumbent; the cone widens after a
// success and narrows after a failure until it is below 1e-9 rad.
double refine(const GapEvaluator& gap, Candidate start, std::size_t batch, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::Index n = start.direction.size();
  Eigen::MatrixXd trial(static_cast<Eigen::Index>(batch), n);
  std::vector<double> values;
  double alpha = 0.2;
  for (int iter = 0; iter < 4000 && alpha > 1e-9; ++iter) {
    for (Eigen::Index r = 0; r < trial.rows(); ++r) {
      Eigen::VectorXd t(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        t(k) = normal(rng);
      }
      t -= t.dot(start.direction) * start.direction;
      const double norm = t.norm();
      if (!(norm > 0.0)) {
        trial.row(r) = start.direction.transpose();
        continue;
      }
      const double angle = alpha * unit(rng);
      trial.row(r) = (std::cos(angle) * start.direction + std::sin(angle) * (t / norm)).normalized();
    }
    gap.evaluate(trial, values);
    const auto it = std::min_element(values.begin(), values.end());
    if (*it < start.value) {
      start.value = *it;
      start.direction = trial.row(it - values.begin()).transpose();
      alpha = std::min(alpha * 1.5, 1.0);
    } else {
      alpha *= 0.7;
    }
  }
  return start.value;
}

}  // namespace

double acai_oracle(const ControlSet& set, const Eigen::VectorXd& d, const OracleOptions& options) {
  const Eigen::Index n = set.dim();
  if (d.size() != n) {
    throw Error("acai_oracle: disturbance has wrong length");
  }
  if (options.n_dirs == 0) {
    throw Error("acai_oracle: n_dirs must be positive");
  }
  const GapEvaluator gap(set, d, options.isa);
  std::vector<double> values;

  if (n == 1) {
    Eigen::MatrixXd both(2, 1);
    both << 1.0, -1.0;
    gap.evaluate(both, values);
    return std::min(values[0], values[1]);
  }

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> normal;
  constexpr std::size_t kChunk = 8192;
  const std::size_t keep = options.refine ? std::max<std::size_t>(options.refine_starts, 1) : 1;
  std::vector<Candidate> best;

  std::size_t done = 0;
  while (done < options.n_dirs) {
    const std::size_t count = std::min(kChunk, options.n_dirs - done);
    Eigen::MatrixXd dirs(static_cast<Eigen::Index>(count), n);
    // Antithetic pairs: row r and row r + half are opposite directions.
    const std::size_t half = (count + 1) / 2;
    for (std::size_t r = 0; r < half; ++r) {
      Eigen::VectorXd g(n);
      do {
        for (Eigen::Index k = 0; k < n; ++k) {
          g(k) = normal(rng);
        }
      } while (!(g.norm() > 0.0));
      g.normalize();
      dirs.row(static_cast<Eigen::Index>(r)) = g.transpose();
      if (r + half < count) {
        dirs.row(static_cast<Eigen::Index>(r + half)) = -g.transpose();
      }
    }
    gap.evaluate(dirs, values);
    for (std::size_t r = 0; r < count; ++r) {
      keep_best(best, keep, values[r], dirs.row(static_cast<Eigen::Index>(r)).transpose());
    }
    done += count;
  }

  double result = best.front().value;
  if (options.refine) {
    for (const Candidate& start : best) {
      result = std::min(result, refine(gap, start, std::max<std::size_t>(options.refine_batch, 1), rng));
    }
  }
  return result;
}

}  // namespace copter_cpi::ctrlgeom
