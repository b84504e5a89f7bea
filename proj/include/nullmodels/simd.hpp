#pragma once

#include <cstddef>
#include <span>
#include <string_view>

// Data-parallel inner loops with a scalar reference implementation and an
// AVX2/FMA variant picked at runtime. Both variants agree to a few ulp; the
// scalar table is the reference used by the equivalence tests.
namespace nullmodels::simd {

struct KernelTable {
  std::string_view name;

  // sum_k w[k] * a[k] * b[k]
  double (*weighted_dot3)(const double* w, const double* a, const double* b, std::size_t n);

  // out[k] = log(x[k]) for positive normal x.
  void (*log)(const double* x, double* out, std::size_t n);

  // sums[p] += sum_k exp(-exponents[p] * log_x[k]),  p = 0..3.
  void (*power_sums4)(const double* log_x, std::size_t n, const double* exponents, double* sums);

  // out[k] = 1 - exp(-exp(v[k])), the poisson kernel evaluated at u = e^v.
  void (*poisson_q_of_log)(const double* v, double* out, std::size_t n);
};

const KernelTable& scalar_kernels();

// nullptr when the binary was built without AVX2 support or the CPU lacks
// AVX2/FMA.
const KernelTable* avx2_kernels();

// AVX2 when available, unless the environment variable NULLMODELS_SIMD is
// set to "scalar". Resolved once per process.
const KernelTable& kernels();

}  // namespace nullmodels::simd
