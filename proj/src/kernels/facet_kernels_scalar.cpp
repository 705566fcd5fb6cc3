#include "copter_cpi/kernels/kernels.hpp"

#include <cmath>

namespace copter_cpi::kernels::detail {

namespace {

double facet_value(const FacetView& facets, std::size_t j, std::span<const double> point) {
  double dot = 0.0;
  for (std::size_t k = 0; k < facets.normals.dim; ++k) {
    dot += facets.normals.at(k, j) * point[k];
  }
  return facets.width[j] - std::abs(facets.offset[j] - dot);
}

}  // namespace

MarginMin facet_margin_scalar(const FacetView& facets, std::span<const double> point,
                              std::size_t first) {
  MarginMin best;
  for (std::size_t j = first; j < facets.normals.count; ++j) {
    const double v = facet_value(facets, j, point);
    if (v < best.value) {
      best = {v, j};
    }
  }
  return best;
}

void facet_margin_batch_scalar(const FacetView& facets, const SoaView& points,
                               std::span<double> values, std::span<std::size_t> argmin,
                               std::size_t first) {
  const std::size_t dim = facets.normals.dim;
  for (std::size_t i = first; i < points.count; ++i) {
    MarginMin best;
    for (std::size_t j = 0; j < facets.normals.count; ++j) {
      double dot = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        dot += facets.normals.at(k, j) * points.at(k, i);
      }
      const double v = facets.width[j] - std::abs(facets.offset[j] - dot);
      if (v < best.value) {
        best = {v, j};
      }
    }
    values[i] = best.value;
    argmin[i] = best.index;
  }
}

void support_gap_scalar(const ZonotopeView& zono, std::span<const double> shift,
                        const SoaView& directions, std::span<double> out, std::size_t first) {
  const std::size_t dim = zono.dim;
  for (std::size_t j = first; j < directions.count; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) {
      s += directions.at(k, j) * shift[k];
    }
    for (std::size_t c = 0; c < zono.count; ++c) {
      const double* h = zono.generators + c * dim;
      double t = 0.0;
      for (std::size_t k = 0; k < dim; ++k) {
        t += directions.at(k, j) * h[k];
      }
      s += std::abs(t) * zono.half_range[c];
    }
    out[j] = s;
  }
}

}  // namespace copter_cpi::kernels::detail
