#include <arm_neon.h>

#include "pcz/kernels.hpp"

// One complex double per float64x2_t.

namespace pcz::kernels {
namespace {

inline const double* as_doubles(const cdouble* p) { return reinterpret_cast<const double*>(p); }
inline double* as_doubles(cdouble* p) { return reinterpret_cast<double*>(p); }

inline float64x2_t cmul(cdouble a, float64x2_t b) {
  const float64x2_t b_swapped = vextq_f64(b, b, 1);
  const float64x2_t ai_signed = {-a.imag(), a.imag()};
  return vfmaq_f64(vmulq_f64(ai_signed, b_swapped), vdupq_n_f64(a.real()), b);
}

void cmatmul_neon(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n, std::size_t k,
                  std::size_t m, bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      float64x2_t acc = accumulate ? vld1q_f64(as_doubles(c + i * m + j)) : vdupq_n_f64(0.0);
      for (std::size_t l = 0; l < k; ++l) {
        acc = vaddq_f64(acc, cmul(a[i * k + l], vld1q_f64(as_doubles(b + l * m + j))));
      }
      vst1q_f64(as_doubles(c + i * m + j), acc);
    }
  }
}

void caxpy_neon(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t yv = vld1q_f64(as_doubles(y + i));
    vst1q_f64(as_doubles(y + i), vaddq_f64(yv, cmul(alpha, vld1q_f64(as_doubles(x + i)))));
  }
}

void cxpay_neon(const cdouble* x, cdouble alpha, const cdouble* y, cdouble* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const float64x2_t xv = vld1q_f64(as_doubles(x + i));
    vst1q_f64(as_doubles(out + i), vaddq_f64(xv, cmul(alpha, vld1q_f64(as_doubles(y + i)))));
  }
}

}  // namespace

const KernelTable& neon_kernels() {
  static const KernelTable table{cmatmul_neon, caxpy_neon, cxpay_neon};
  return table;
}

}  // namespace pcz::kernels
