#include "fluxlab/simd.hpp"

namespace fluxlab::simd {
namespace {

// Five-point weights (-1, 16, -30, 16, -1) / 12.
constexpr double c5_0 = -30.0 / 12.0;
constexpr double c5_1 = 16.0 / 12.0;
constexpr double c5_2 = -1.0 / 12.0;

inline cplx second_derivative(const cplx* f, std::size_t i, int order,
                              double inv_dx2) {
  if (order == 4) {
    return inv_dx2 * (c5_0 * f[i] + c5_1 * (f[i - 1] + f[i + 1]) +
                      c5_2 * (f[i - 2] + f[i + 2]));
  }
  return inv_dx2 * (f[i - 1] - 2.0 * f[i] + f[i + 1]);
}

void laplacian_scalar(const cplx* in, cplx* out, std::size_t lo, std::size_t hi,
                      int order, double inv_dx2) {
  for (std::size_t i = lo; i < hi; ++i) out[i] = second_derivative(in, i, order, inv_dx2);
}

void gpe_rhs_scalar(const cplx* self, const cplx* other, const double* trap,
                    cplx* out, std::size_t lo, std::size_t hi, int order,
                    const RhsCoeffs& c) {
  for (std::size_t i = lo; i < hi; ++i) {
    const cplx p = self[i];
    const double dens = p.real() * p.real() + p.imag() * p.imag();
    const cplx h = -0.5 * second_derivative(self, i, order, c.inv_dx2) +
                   (dens - c.rho0 + trap[i]) * p - c.k * other[i];
    out[i] = cplx(h.imag(), -h.real());
  }
}

void axpy_scalar(cplx* out, const cplx* a, const cplx* b, double s, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + s * b[i];
}

double sum_abs2_scalar(const cplx* in, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += in[i].real() * in[i].real() + in[i].imag() * in[i].imag();
  return acc;
}

}  // namespace

namespace detail {
const Kernels scalar_kernels{Isa::scalar, "scalar", laplacian_scalar, gpe_rhs_scalar,
                             axpy_scalar, sum_abs2_scalar};
}

}  // namespace fluxlab::simd
