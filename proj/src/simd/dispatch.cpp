#include <cstdlib>
#include <string_view>

#include "nullmodels/simd.hpp"

namespace nullmodels::simd {

#if defined(NULLMODELS_HAVE_AVX2)
const KernelTable& avx2_table_impl();
#endif

const KernelTable* avx2_kernels() {
#if defined(NULLMODELS_HAVE_AVX2)
  static const bool supported = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return supported ? &avx2_table_impl() : nullptr;
#else
  return nullptr;
#endif
}

const KernelTable& kernels() {
  static const KernelTable& chosen = [] () -> const KernelTable& {
    const char* env = std::getenv("NULLMODELS_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return scalar_kernels();
    if (const KernelTable* t = avx2_kernels()) return *t;
    return scalar_kernels();
  }();
  return chosen;
}

}  // namespace nullmodels::simd
