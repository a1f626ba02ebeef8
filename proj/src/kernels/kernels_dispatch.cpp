#include <atomic>
#include <cstdlib>
#include <string>

#include "pcz/kernels.hpp"

namespace pcz::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(PCZ_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& table_for(Backend backend) {
  switch (backend) {
#if defined(PCZ_HAVE_AVX2)
    case Backend::kAvx2:
      return avx2_kernels();
#endif
#if defined(PCZ_HAVE_NEON)
    case Backend::kNeon:
      return neon_kernels();
#endif
    default:
      return scalar_kernels();
  }
}

struct State {
  std::atomic<Backend> backend;
  std::atomic<const KernelTable*> table;
  State() {
    const Backend b = select_default_backend();
    backend.store(b);
    table.store(&table_for(b));
  }
};

State& state() {
  static State s;
  return s;
}

}  // namespace

bool backend_supported(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return true;
    case Backend::kAvx2:
      return cpu_has_avx2();
    case Backend::kNeon:
#if defined(PCZ_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

std::vector<Backend> supported_backends() {
  std::vector<Backend> out;
  for (Backend b : {Backend::kScalar, Backend::kAvx2, Backend::kNeon}) {
    if (backend_supported(b)) out.push_back(b);
  }
  return out;
}

std::string_view backend_name(Backend backend) {
  switch (backend) {
    case Backend::kScalar:
      return "scalar";
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
  }
  return "unknown";
}

Backend select_default_backend() {
  if (const char* env = std::getenv("PCZ_KERNELS"); env != nullptr && std::string(env) == "scalar") {
    return Backend::kScalar;
  }
  if (backend_supported(Backend::kAvx2)) return Backend::kAvx2;
  if (backend_supported(Backend::kNeon)) return Backend::kNeon;
  return Backend::kScalar;
}

Backend active_backend() { return state().backend.load(); }

void set_backend(Backend backend) {
  if (!backend_supported(backend)) {
    throw InvalidArgument("kernel backend '" + std::string(backend_name(backend)) +
                          "' is not available on this build/CPU");
  }
  state().backend.store(backend);
  state().table.store(&table_for(backend));
}

const KernelTable& active() { return *state().table.load(std::memory_order_relaxed); }

}  // namespace pcz::kernels
