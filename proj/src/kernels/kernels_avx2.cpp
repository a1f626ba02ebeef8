#include <immintrin.h>

#include "pcz/kernels.hpp"

// Two complex doubles per __m256d, interleaved [re0 im0 re1 im1] exactly as
// std::complex<double> lays them out in memory.

namespace pcz::kernels {
namespace {

inline const double* as_doubles(const cdouble* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cdouble* p) { return reinterpret_cast<double*>(p); }

// (ar + i ai) * [b0, b1]
inline __m256d cmul_bcast(__m256d ar, __m256d ai, __m256d b) {
  const __m256d b_swapped = _mm256_permute_pd(b, 0b0101);
  return _mm256_fmaddsub_pd(ar, b, _mm256_mul_pd(ai, b_swapped));
}

inline __m128d cmul_bcast(__m128d ar, __m128d ai, __m128d b) {
  const __m128d b_swapped = _mm_permute_pd(b, 0b01);
  return _mm_fmaddsub_pd(ar, b, _mm_mul_pd(ai, b_swapped));
}

void cmatmul_avx2(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n, std::size_t k,
                  std::size_t m, bool accumulate) {
  const std::size_t m_pairs = m / 2;
  const bool tail = (m % 2) != 0;
  for (std::size_t i = 0; i < n; ++i) {
    double* c_row = as_doubles(c + i * m);
    for (std::size_t jp = 0; jp < m_pairs; ++jp) {
      __m256d acc = accumulate ? _mm256_loadu_pd(c_row + 4 * jp) : _mm256_setzero_pd();
      for (std::size_t l = 0; l < k; ++l) {
        const cdouble x = a[i * k + l];
        const __m256d bv = _mm256_loadu_pd(as_doubles(b + l * m) + 4 * jp);
        acc = _mm256_add_pd(acc, cmul_bcast(_mm256_set1_pd(x.real()), _mm256_set1_pd(x.imag()), bv));
      }
      _mm256_storeu_pd(c_row + 4 * jp, acc);
    }
    if (tail) {
      const std::size_t j = m - 1;
      __m128d acc = accumulate ? _mm_loadu_pd(c_row + 2 * j) : _mm_setzero_pd();
      for (std::size_t l = 0; l < k; ++l) {
        const cdouble x = a[i * k + l];
        const __m128d bv = _mm_loadu_pd(as_doubles(b + l * m + j));
        acc = _mm_add_pd(acc, cmul_bcast(_mm_set1_pd(x.real()), _mm_set1_pd(x.imag()), bv));
      }
      _mm_storeu_pd(c_row + 2 * j, acc);
    }
  }
}

void caxpy_avx2(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = as_doubles(x);
  double* yd = as_doubles(y);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(yd + 2 * i, _mm256_add_pd(yv, cmul_bcast(ar, ai, xv)));
  }
  if (i < n) {
    const __m128d xv = _mm_loadu_pd(xd + 2 * i);
    const __m128d yv = _mm_loadu_pd(yd + 2 * i);
    _mm_storeu_pd(yd + 2 * i,
                  _mm_add_pd(yv, cmul_bcast(_mm_set1_pd(alpha.real()), _mm_set1_pd(alpha.imag()), xv)));
  }
}

void cxpay_avx2(const cdouble* x, cdouble alpha, const cdouble* y, cdouble* out, std::size_t n) {
  const __m256d ar = _mm256_set1_pd(alpha.real());
  const __m256d ai = _mm256_set1_pd(alpha.imag());
  const double* xd = as_doubles(x);
  const double* yd = as_doubles(y);
  double* od = as_doubles(out);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const __m256d xv = _mm256_loadu_pd(xd + 2 * i);
    const __m256d yv = _mm256_loadu_pd(yd + 2 * i);
    _mm256_storeu_pd(od + 2 * i, _mm256_add_pd(xv, cmul_bcast(ar, ai, yv)));
  }
  if (i < n) {
    const __m128d xv = _mm_loadu_pd(xd + 2 * i);
    const __m128d yv = _mm_loadu_pd(yd + 2 * i);
    _mm_storeu_pd(od + 2 * i,
                  _mm_add_pd(xv, cmul_bcast(_mm_set1_pd(alpha.real()), _mm_set1_pd(alpha.imag()), yv)));
  }
}

}  // namespace

const KernelTable& avx2_kernels() {
  static const KernelTable table{cmatmul_avx2, caxpy_avx2, cxpay_avx2};
  return table;
}

}  // namespace pcz::kernels
