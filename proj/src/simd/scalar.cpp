#include <cmath>

#include "nullmodels/simd.hpp"

namespace nullmodels::simd {

namespace {

double weighted_dot3(const double* w, const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t k = 0; k < n; ++k) sum += w[k] * a[k] * b[k];
  return sum;
}

void log_kernel(const double* x, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = std::log(x[k]);
}

void power_sums4(const double* log_x, std::size_t n, const double* exponents, double* sums) {
  for (int p = 0; p < 4; ++p) {
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += std::exp(-exponents[p] * log_x[k]);
    sums[p] += acc;
  }
}

void poisson_q_of_log(const double* v, double* out, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = -std::expm1(-std::exp(v[k]));
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{"scalar", weighted_dot3, log_kernel, power_sums4, poisson_q_of_log};
  return table;
}

}  // namespace nullmodels::simd
