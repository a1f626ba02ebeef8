#pragma once

// Complex inner-loop kernels used by the propagator and the density-matrix
// simulator. Each kernel has a portable scalar reference and, where the build
// and the CPU allow it, an AVX2/FMA or NEON variant. The variant is chosen once
// at startup from cpuid and can be overridden for equivalence testing.

#include <cstddef>
#include <string_view>
#include <vector>

#include "pcz/types.hpp"

namespace pcz::kernels {

enum class Backend { kScalar, kAvx2, kNeon };

struct KernelTable {
  // c = a * b (or c += a * b when accumulate), row-major, a is n x k, b is k x m.
  void (*cmatmul)(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n, std::size_t k,
                  std::size_t m, bool accumulate);
  // y += alpha * x
  void (*caxpy)(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n);
  // out = x + alpha * y
  void (*cxpay)(const cdouble* x, cdouble alpha, const cdouble* y, cdouble* out, std::size_t n);
};

const KernelTable& scalar_kernels();
#if defined(PCZ_HAVE_AVX2)
const KernelTable& avx2_kernels();
#endif
#if defined(PCZ_HAVE_NEON)
const KernelTable& neon_kernels();
#endif

bool backend_supported(Backend backend);
std::vector<Backend> supported_backends();
std::string_view backend_name(Backend backend);

Backend active_backend();
// Throws InvalidArgument if the backend is not compiled in or not supported by this CPU.
void set_backend(Backend backend);
// Picks the widest supported backend; PCZ_KERNELS=scalar in the environment forces scalar.
Backend select_default_backend();

const KernelTable& active();

inline void cmatmul(const cdouble* a, const cdouble* b, cdouble* c, std::size_t n, std::size_t k,
                    std::size_t m, bool accumulate = false) {
  active().cmatmul(a, b, c, n, k, m, accumulate);
}
inline void caxpy(cdouble alpha, const cdouble* x, cdouble* y, std::size_t n) {
  active().caxpy(alpha, x, y, n);
}
inline void cxpay(const cdouble* x, cdouble alpha, const cdouble* y, cdouble* out, std::size_t n) {
  active().cxpay(x, alpha, y, out, n);
}

}  // namespace pcz::kernels
