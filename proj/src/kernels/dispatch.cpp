#include "copter_cpi/error.hpp"
#include "copter_cpi/kernels/kernels.hpp"

#include <cstdlib>
#include <string>

namespace copter_cpi::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(COPTER_CPI_HAVE_AVX2) && (defined(__x86_64__) || defined(__i386__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa detect() {
  if (const char* env = std::getenv("COPTER_CPI_ISA"); env != nullptr && std::string(env) == "scalar") {
    return Isa::kScalar;
  }
  return cpu_has_avx2() ? Isa::kAvx2 : Isa::kScalar;
}

void require(Isa isa) {
  if (!isa_available(isa)) {
    throw Error("kernel variant '" + std::string(isa_name(isa)) + "' is not available on this CPU");
  }
}

}  // namespace

Isa best_isa() {
  static const Isa isa = detect();
  return isa;
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
      return cpu_has_avx2();
  }
  return false;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
  }
  return "unknown";
}

MarginMin facet_margin(Isa isa, const FacetView& facets, std::span<const double> point) {
  require(isa);
#if defined(COPTER_CPI_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    return detail::facet_margin_avx2(facets, point);
  }
#endif
  return detail::facet_margin_scalar(facets, point);
}

void facet_margin_batch(Isa isa, const FacetView& facets, const SoaView& points,
                        std::span<double> values, std::span<std::size_t> argmin) {
  require(isa);
#if defined(COPTER_CPI_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::facet_margin_batch_avx2(facets, points, values, argmin);
    return;
  }
#endif
  detail::facet_margin_batch_scalar(facets, points, values, argmin, 0);
}

void support_gap(Isa isa, const ZonotopeView& zono, std::span<const double> shift,
                 const SoaView& directions, std::span<double> out) {
  require(isa);
#if defined(COPTER_CPI_HAVE_AVX2)
  if (isa == Isa::kAvx2) {
    detail::support_gap_avx2(zono, shift, directions, out);
    return;
  }
#endif
  detail::support_gap_scalar(zono, shift, directions, out, 0);
}

}  // namespace copter_cpi::kernels
