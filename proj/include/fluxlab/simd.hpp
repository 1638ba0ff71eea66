#pragma once

// Data-parallel inner loops of the method-of-lines discretization. Each
// kernel has a scalar reference implementation and, where the build target
// allows it, an AVX2/FMA variant. The active table is chosen once at first
// use from the CPU features; FLUXLAB_ISA=scalar forces the reference path.

#include <complex>
#include <cstddef>

namespace fluxlab::simd {

using cplx = std::complex<double>;

enum class Isa { scalar, avx2 };

struct RhsCoeffs {
  double inv_dx2;
  double rho0;
  double k;
};

struct Kernels {
  Isa isa;
  const char* name;

  /// out[i] = (d^2/dx^2 in)[i] for i in [lo, hi); every stencil neighbour of
  /// those points must lie inside the array.
  void (*laplacian)(const cplx* in, cplx* out, std::size_t lo, std::size_t hi,
                    int order, double inv_dx2);

  /// out[i] = -i * ( -1/2 self'' + (|self|^2 - rho0 + trap) self - k other )
  /// for i in [lo, hi), same neighbour requirement as laplacian.
  void (*gpe_rhs)(const cplx* self, const cplx* other, const double* trap,
                  cplx* out, std::size_t lo, std::size_t hi, int order,
                  const RhsCoeffs& c);

  /// out[i] = a[i] + s * b[i]; out may alias a.
  void (*axpy)(cplx* out, const cplx* a, const cplx* b, double s,
               std::size_t n);

  /// sum_i |in[i]|^2
  double (*sum_abs2)(const cplx* in, std::size_t n);
};

bool supported(Isa isa);
/// Kernel table for a specific instruction set; throws DomainError if the
/// build or the CPU does not provide it.
const Kernels& kernels_for(Isa isa);
/// Kernel table selected for this process.
const Kernels& active();

namespace detail {
extern const Kernels scalar_kernels;
#ifdef FLUXLAB_HAVE_AVX2
extern const Kernels avx2_kernels;
#endif
}  // namespace detail

}  // namespace fluxlab::simd
