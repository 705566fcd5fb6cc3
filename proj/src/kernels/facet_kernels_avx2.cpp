#include "copter_cpi/kernels/kernels.hpp"

#include <immintrin.h>

#include <array>
#include <cstdint>

namespace copter_cpi::kernels::detail {

namespace {

inline __m256d abs_pd(__m256d x) {
  return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

}  // namespace

MarginMin facet_margin_avx2(const FacetView& facets, std::span<const double> point) {
  const std::size_t dim = facets.normals.dim;
  const std::size_t count = facets.normals.count;
  const std::size_t stride = facets.normals.stride;
  const double* normals = facets.normals.data;

  __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
  __m256d best_idx = _mm256_setzero_pd();
  __m256d idx = _mm256_setr_pd(0.0, 1.0, 2.0, 3.0);
  const __m256d four = _mm256_set1_pd(4.0);

  std::size_t j = 0;
  for (; j + 4 <= count; j += 4) {
    __m256d dot = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d n = _mm256_loadu_pd(normals + k * stride + j);
      dot = _mm256_add_pd(dot, _mm256_mul_pd(n, _mm256_set1_pd(point[k])));
    }
    const __m256d off = _mm256_loadu_pd(facets.offset + j);
    const __m256d w = _mm256_loadu_pd(facets.width + j);
    const __m256d v = _mm256_sub_pd(w, abs_pd(_mm256_sub_pd(off, dot)));
    const __m256d lt = _mm256_cmp_pd(v, best, _CMP_LT_OQ);
    best = _mm256_blendv_pd(best, v, lt);
    best_idx = _mm256_blendv_pd(best_idx, idx, lt);
    idx = _mm256_add_pd(idx, four);
  }

  std::array<double, 4> lane_v{};
  std::array<double, 4> lane_i{};
  _mm256_storeu_pd(lane_v.data(), best);
  _mm256_storeu_pd(lane_i.data(), best_idx);

  MarginMin result;
  for (std::size_t l = 0; l < 4 && j > 0; ++l) {
    const auto li = static_cast<std::size_t>(lane_i[l]);
    if (lane_v[l] < result.value || (lane_v[l] == result.value && li < result.index)) {
      result = {lane_v[l], li};
    }
  }
  if (j < count) {
    const MarginMin rest = facet_margin_scalar(facets, point, j);
    if (rest.value < result.value) {
      result = rest;
    }
  }
  return result;
}

void facet_margin_batch_avx2(const FacetView& facets, const SoaView& points,
                             std::span<double> values, std::span<std::size_t> argmin) {
  const std::size_t dim = facets.normals.dim;
  const std::size_t count = facets.normals.count;

  std::size_t i = 0;
  for (; i + 4 <= points.count; i += 4) {
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d best_idx = _mm256_setzero_pd();
    for (std::size_t j = 0; j < count; ++j) {
      __m256d dot = _mm256_setzero_pd();
      for (std::size_t k = 0; k < dim; ++k) {
        const __m256d p = _mm256_loadu_pd(points.data + k * points.stride + i);
        dot = _mm256_add_pd(dot, _mm256_mul_pd(_mm256_set1_pd(facets.normals.at(k, j)), p));
      }
      const __m256d v = _mm256_sub_pd(
          _mm256_set1_pd(facets.width[j]),
          abs_pd(_mm256_sub_pd(_mm256_set1_pd(facets.offset[j]), dot)));
      const __m256d lt = _mm256_cmp_pd(v, best, _CMP_LT_OQ);
      best = _mm256_blendv_pd(best, v, lt);
      best_idx = _mm256_blendv_pd(best_idx, _mm256_set1_pd(static_cast<double>(j)), lt);
    }
    std::array<double, 4> lane_i{};
    _mm256_storeu_pd(values.data() + i, best);
    _mm256_storeu_pd(lane_i.data(), best_idx);
    for (std::size_t l = 0; l < 4; ++l) {
      argmin[i + l] = count == 0 ? kNoIndex : static_cast<std::size_t>(lane_i[l]);
    }
  }
  facet_margin_batch_scalar(facets, points, values, argmin, i);
}

void support_gap_avx2(const ZonotopeView& zono, std::span<const double> shift,
                      const SoaView& directions, std::span<double> out) {
  const std::size_t dim = zono.dim;
  std::size_t j = 0;
  for (; j + 4 <= directions.count; j += 4) {
    __m256d s = _mm256_setzero_pd();
    for (std::size_t k = 0; k < dim; ++k) {
      const __m256d g = _mm256_loadu_pd(directions.data + k * directions.stride + j);
      s = _mm256_add_pd(s, _mm256_mul_pd(g, _mm256_set1_pd(shift[k])));
    }
    for (std::size_t c = 0; c < zono.count; ++c) {
      const double* h = zono.generators + c * dim;
      __m256d t = _mm256_setzero_pd();
      for (std::size_t k = 0; k < dim; ++k) {
        const __m256d g = _mm256_loadu_pd(directions.data + k * directions.stride + j);
        t = _mm256_add_pd(t, _mm256_mul_pd(g, _mm256_set1_pd(h[k])));
      }
      s = _mm256_add_pd(s, _mm256_mul_pd(abs_pd(t), _mm256_set1_pd(zono.half_range[c])));
    }
    _mm256_storeu_pd(out.data() + j, s);
  }
  support_gap_scalar(zono, shift, directions, out, j);
}

}  // namespace copter_cpi::kernels::detail
