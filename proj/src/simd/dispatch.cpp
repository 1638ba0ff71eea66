#include <cstdlib>
#include <string_view>

#include "fluxlab/error.hpp"
#include "fluxlab/simd.hpp"

namespace fluxlab::simd {
namespace {

bool cpu_has_avx2() {
#if defined(FLUXLAB_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels& select() {
  const char* forced = std::getenv("FLUXLAB_ISA");
  if (forced != nullptr && std::string_view(forced) == "scalar") return detail::scalar_kernels;
  if (supported(Isa::avx2)) return kernels_for(Isa::avx2);
  return detail::scalar_kernels;
}

}  // namespace

bool supported(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return true;
    case Isa::avx2:
      return cpu_has_avx2();
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!supported(isa)) throw DomainError("requested SIMD kernel set is not available on this CPU/build");
#ifdef FLUXLAB_HAVE_AVX2
  if (isa == Isa::avx2) return detail::avx2_kernels;
#endif
  return detail::scalar_kernels;
}

const Kernels& active() {
  static const Kernels& table = select();
  return table;
}

}  // namespace fluxlab::simd
