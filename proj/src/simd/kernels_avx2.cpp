// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
// Complex arrays are treated as interleaved (re, im) doubles, two complex
// values per 256-bit register.

#include <immintrin.h>

#include "fluxlab/simd.hpp"

namespace fluxlab::simd {
namespace {

inline const double* as_doubles(const cplx* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cplx* p) { return reinterpret_cast<double*>(p); }

// Undivided second difference (times dx^2) at points i, i+1.
inline __m256d stencil_sum(const double* f, std::size_t i, int order) {
  const __m256d x = _mm256_loadu_pd(f + 2 * i);
  const __m256d nb1 = _mm256_add_pd(_mm256_loadu_pd(f + 2 * (i - 1)), _mm256_loadu_pd(f + 2 * (i + 1)));
  if (order == 4) {
    const __m256d nb2 = _mm256_add_pd(_mm256_loadu_pd(f + 2 * (i - 2)), _mm256_loadu_pd(f + 2 * (i + 2)));
    __m256d acc = _mm256_mul_pd(_mm256_set1_pd(-30.0 / 12.0), x);
    acc = _mm256_fmadd_pd(_mm256_set1_pd(16.0 / 12.0), nb1, acc);
    return _mm256_fmadd_pd(_mm256_set1_pd(-1.0 / 12.0), nb2, acc);
  }
  return _mm256_fmadd_pd(_mm256_set1_pd(-2.0), x, nb1);
}

void laplacian_avx2(const cplx* in, cplx* out, std::size_t lo, std::size_t hi,
                    int order, double inv_dx2) {
  const double* f = as_doubles(in);
  double* o = as_doubles(out);
  const __m256d scale = _mm256_set1_pd(inv_dx2);
  std::size_t i = lo;
  for (; i + 2 <= hi; i += 2) _mm256_storeu_pd(o + 2 * i, _mm256_mul_pd(scale, stencil_sum(f, i, order)));
  if (i < hi) detail::scalar_kernels.laplacian(in, out, i, hi, order, inv_dx2);
}

void gpe_rhs_avx2(const cplx* self, const cplx* other, const double* trap,
                  cplx* out, std::size_t lo, std::size_t hi, int order,
                  const RhsCoeffs& c) {
  const double* f = as_doubles(self);
  const double* g = as_doubles(other);
  double* o = as_doubles(out);
  const __m256d half_scale = _mm256_set1_pd(-0.5 * c.inv_dx2);
  const __m256d minus_k = _mm256_set1_pd(-c.k);
  const __m256d rho0 = _mm256_set1_pd(c.rho0);
  const __m256d conj_sign = _mm256_setr_pd(1.0, -1.0, 1.0, -1.0);
  std::size_t i = lo;
  for (; i + 2 <= hi; i += 2) {
    const __m256d x = _mm256_loadu_pd(f + 2 * i);
    const __m256d sq = _mm256_mul_pd(x, x);
    const __m256d dens = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0b0101));
    const __m256d v = _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(trap + i)), 0x50);
    const __m256d coef = _mm256_sub_pd(_mm256_add_pd(dens, v), rho0);
    __m256d h = _mm256_mul_pd(minus_k, _mm256_loadu_pd(g + 2 * i));
    h = _mm256_fmadd_pd(half_scale, stencil_sum(f, i, order), h);
    h = _mm256_fmadd_pd(coef, x, h);
    // -i * (hr + i hi) = hi - i hr
    _mm256_storeu_pd(o + 2 * i, _mm256_mul_pd(_mm256_permute_pd(h, 0b0101), conj_sign));
  }
  if (i < hi) detail::scalar_kernels.gpe_rhs(self, other, trap, out, i, hi, order, c);
}

void axpy_avx2(cplx* out, const cplx* a, const cplx* b, double s, std::size_t n) {
  const double* pa = as_doubles(a);
  const double* pb = as_doubles(b);
  double* po = as_doubles(out);
  const __m256d vs = _mm256_set1_pd(s);
  const std::size_t m = 2 * n;
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4)
    _mm256_storeu_pd(po + j, _mm256_fmadd_pd(vs, _mm256_loadu_pd(pb + j), _mm256_loadu_pd(pa + j)));
  for (; j < m; ++j) po[j] = pa[j] + s * pb[j];
}

double sum_abs2_avx2(const cplx* in, std::size_t n) {
  const double* p = as_doubles(in);
  const std::size_t m = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t j = 0;
  for (; j + 4 <= m; j += 4) {
    const __m256d x = _mm256_loadu_pd(p + j);
    acc = _mm256_fmadd_pd(x, x, acc);
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double total = (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
  for (; j < m; ++j) total += p[j] * p[j];
  return total;
}

}  // namespace

namespace detail {
const Kernels avx2_kernels{Isa::avx2, "avx2", laplacian_avx2, gpe_rhs_avx2, axpy_avx2,
                           sum_abs2_avx2};
}

}  // namespace fluxlab::simd
