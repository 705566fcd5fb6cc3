#include "copter_cpi/ctrlgeom/acai.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "copter_cpi/error.hpp"

namespace copter_cpi::ctrlgeom {

namespace {

// Same accumulation order as the kernels, so offset - normal·center is exactly 0.
double sequential_dot(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double dot = 0.0;
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    dot += a(k) * b(k);
  }
  return dot;
}

}  // namespace

FacetTable::FacetTable(const ControlSet& set, kernels::Isa isa)
    : dim_(set.dim()), center_(ctrlgeom::center(set)), isa_(isa) {
  if (!set.full_rank()) {
    throw Error("closed-form inapplicable: rank(H) = " + std::to_string(set.rank()) + " < n = " +
                std::to_string(set.dim()));
  }
  partitions_ = enumerate_partitions(set);
  const Eigen::MatrixXd& h = set.effectiveness();
  const Eigen::VectorXd ranges = set.box().ranges();

  std::vector<const Eigen::VectorXd*> normals;
  for (std::size_t j = 0; j < partitions_.size(); ++j) {
    const FacetPartition& part = partitions_[j];
    if (!part.xi) {
      continue;
    }
    const Eigen::VectorXd& xi = *part.xi;
    double width = 0.0;
    for (Eigen::Index col : part.remaining) {
      width += std::abs(xi.dot(h.col(col))) * ranges(col);
    }
    width_.push_back(0.5 * width);
    offset_.push_back(sequential_dot(xi, center_));
    facet_partition_.push_back(j);
    normals.push_back(&xi);
  }

  const std::size_t count = normals.size();
  normals_.resize(static_cast<std::size_t>(dim_) * count);
  for (std::size_t j = 0; j < count; ++j) {
    for (Eigen::Index k = 0; k < dim_; ++k) {
      normals_[static_cast<std::size_t>(k) * count + j] = (*normals[j])(k);
    }
  }
  max_acai_ = acai(center_).value;
}

kernels::FacetView FacetTable::view() const {
  kernels::FacetView v;
  v.normals = {normals_.data(), static_cast<std::size_t>(dim_), width_.size(), width_.size()};
  v.width = width_.data();
  v.offset = offset_.data();
  return v;
}

AcaiResult FacetTable::acai(std::span<const double> d) const {
  if (d.size() != static_cast<std::size_t>(dim_)) {
    throw Error("acai: disturbance has length " + std::to_string(d.size()) + ", expected " +
                std::to_string(dim_));
  }
  const kernels::MarginMin m = kernels::facet_margin(isa_, view(), d);
  AcaiResult result{m.value, std::nullopt};
  if (m.index != kernels::kNoIndex) {
    result.partition = facet_partition_[m.index];
  }
  return result;
}

void FacetTable::acai_batch(const Eigen::MatrixXd& points, std::span<double> out) const {
  if (points.cols() != dim_) {
    throw Error("acai_batch: points have " + std::to_string(points.cols()) + " columns, expected " +
                std::to_string(dim_));
  }
  const auto count = static_cast<std::size_t>(points.rows());
  if (out.size() != count) {
    throw Error("acai_batch: output span has wrong length");
  }
  std::vector<std::size_t> argmin(count);
  const kernels::SoaView soa{points.data(), static_cast<std::size_t>(dim_), count, count};
  kernels::facet_margin_batch(isa_, view(), soa, out, argmin);
}

AcaiResult acai_detail(const ControlSet& set, const Eigen::VectorXd& d) {
  return FacetTable(set).acai(d);
}

double acai(const ControlSet& set, const Eigen::VectorXd& d) {
  return acai_detail(set, d).value;
}

double max_acai(const ControlSet& set) {
  return FacetTable(set).max_acai();
}

}  // namespace copter_cpi::ctrlgeom
