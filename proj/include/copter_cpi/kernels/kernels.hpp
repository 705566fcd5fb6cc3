#pragma once

// Data-parallel inner loops behind the ACAI computations. Every kernel has a
// scalar reference implementation and, on x86-64, an AVX2 variant that performs
// the same floating-point operations in the same order per element, so the two
// agree bit-for-bit.

#include <cstddef>
#include <limits>
#include <span>
#include <string_view>

namespace copter_cpi::kernels {

enum class Isa { kScalar, kAvx2 };

/// Best variant this process may use. Setting COPTER_CPI_ISA=scalar in the
/// environment pins the scalar path.
Isa best_isa();
bool isa_available(Isa isa);
std::string_view isa_name(Isa isa);

/// Structure-of-arrays block: component k of item j is data[k * stride + j].
struct SoaView {
  const double* data = nullptr;
  std::size_t dim = 0;
  std::size_t count = 0;
  std::size_t stride = 0;

  double at(std::size_t k, std::size_t j) const { return data[k * stride + j]; }
};

/// Facet slabs of a zonotope: unit normal, half-width and normal·center.
struct FacetView {
  SoaView normals;
  const double* width = nullptr;
  const double* offset = nullptr;
};

/// Zonotope generators with their half ranges (column-major, dim x count).
struct ZonotopeView {
  const double* generators = nullptr;
  const double* half_range = nullptr;
  std::size_t dim = 0;
  std::size_t count = 0;
};

inline constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

struct MarginMin {
  double value = std::numeric_limits<double>::infinity();
  std::size_t index = kNoIndex;
};

/// min_j width_j - |offset_j - normal_j · point|, ties resolved to the lowest j.
MarginMin facet_margin(Isa isa, const FacetView& facets, std::span<const double> point);

/// facet_margin for every point of an SoA block.
void facet_margin_batch(Isa isa, const FacetView& facets, const SoaView& points,
                        std::span<double> values, std::span<std::size_t> argmin);

/// out_j = g_j · shift + sum_k |g_j · h_k| * half_range_k for every direction g_j.
void support_gap(Isa isa, const ZonotopeView& zono, std::span<const double> shift,
                 const SoaView& directions, std::span<double> out);

namespace detail {

MarginMin facet_margin_scalar(const FacetView& facets, std::span<const double> point,
                              std::size_t first = 0);
void facet_margin_batch_scalar(const FacetView& facets, const SoaView& points,
                               std::span<double> values, std::span<std::size_t> argmin,
                               std::size_t first);
void support_gap_scalar(const ZonotopeView& zono, std::span<const double> shift,
                        const SoaView& directions, std::span<double> out, std::size_t first);

MarginMin facet_margin_avx2(const FacetView& facets, std::span<const double> point);
void facet_margin_batch_avx2(const FacetView& facets, const SoaView& points,
                             std::span<double> values, std::span<std::size_t> argmin);
void support_gap_avx2(const ZonotopeView& zono, std::span<const double> shift,
                      const SoaView& directions, std::span<double> out);

}  // namespace detail
}  // namespace copter_cpi::kernels
