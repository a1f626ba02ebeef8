#include "pcz/kernels.hpp"

namespace pcz::kernels {
namespace {

// Plain re/im arithmetic; std::complex operator* would go through the
// Annex G NaN-recovery path, which the SIMD variants do not replicate.
void cmatmul_scalar(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n, std::size_t k,
                    std::size_t m, bool accumulate) {
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double re = 0.0;
      double im = 0.0;
      for (std::size_t l = 0; l < k; ++l) {
        const cdouble x = a[i * k + l];
        const cdouble y = b[l * m + j];
        re += x.real() * y.real() - x.imag() * y.imag();
        im += x.real() * y.imag() + x.imag() * y.real();
      }
      if (accumulate) {
        c[i * m + j] += cdouble(re, im);
      } else {
        c[i * m + j] = cdouble(re, im);
      }
    }
  }
}

void caxpy_scalar(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real();
    const double xi = x[i].imag();
    y[i] = cdouble(y[i].real() + ar * xr - ai * xi, y[i].imag() + ar * xi + ai * xr);
  }
}

void cxpay_scalar(const cdouble* x, cdouble alpha, const cdouble* y, cdouble* out, std::size_t n) {
  const double ar = alpha.real();
  const double ai = alpha.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double yr = y[i].real();
    const double yi = y[i].imag();
    out[i] = cdouble(x[i].real() + ar * yr - ai * yi, x[i].imag() + ar * yi + ai * yr);
  }
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{cmatmul_scalar, caxpy_scalar, cxpay_scalar};
  return table;
}

}  // namespace pcz::kernels
