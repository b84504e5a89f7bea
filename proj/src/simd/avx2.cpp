// Compiled with -mavx2 -mfma; only entered after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "nullmodels/simd.hpp"

namespace nullmodels::simd {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

// exp(x): x = n ln2 + r with |r| <= ln2/2, degree-13 Taylor polynomial for
// e^r, then scale by 2^n through the exponent field. Inputs below -708
// return 0, above 709 return +inf.
inline __m256d exp_pd(__m256d x) {
  const __m256d lo_limit = _mm256_set1_pd(-708.0);
  const __m256d hi_limit = _mm256_set1_pd(709.0);
  const __m256d underflow = _mm256_cmp_pd(x, lo_limit, _CMP_LT_OQ);
  const __m256d overflow = _mm256_cmp_pd(x, hi_limit, _CMP_GT_OQ);
  x = _mm256_max_pd(_mm256_min_pd(x, hi_limit), lo_limit);

  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(1.4426950408889634)),
                                    _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(6.93147180369123816490e-01), x);
  r = _mm256_fnmadd_pd(n, _mm256_set1_pd(1.90821492927058770002e-10), r);

  static constexpr double c[] = {1.0 / 6227020800.0, 1.0 / 479001600.0, 1.0 / 39916800.0, 1.0 / 3628800.0,
                                 1.0 / 362880.0,     1.0 / 40320.0,     1.0 / 5040.0,     1.0 / 720.0,
                                 1.0 / 120.0,        1.0 / 24.0,        1.0 / 6.0,        0.5,
                                 1.0,                1.0};
  __m256d p = _mm256_set1_pd(c[0]);
  for (int k = 1; k < 14; ++k) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(c[k]));

  const __m128i ni = _mm256_cvtpd_epi32(n);
  const __m256i e = _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(ni), _mm256_set1_epi64x(1023)), 52);
  __m256d result = _mm256_mul_pd(p, _mm256_castsi256_pd(e));
  result = _mm256_blendv_pd(result, _mm256_setzero_pd(), underflow);
  return _mm256_blendv_pd(result, _mm256_set1_pd(HUGE_VAL), overflow);
}

// log(x) for positive normal x: x = 2^e m with m in [sqrt(1/2), sqrt(2)),
// log m = 2 atanh(s), s = (m-1)/(m+1), odd series through s^21.
inline __m256d log_pd(__m256d x) {
  const __m256i bits = _mm256_castpd_si256(x);
  __m256i exponent = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52), _mm256_set1_epi64x(1023));
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(0x000fffffffffffffLL)),
                      _mm256_set1_epi64x(0x3ff0000000000000LL)));
  const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.4142135623730951), _CMP_GT_OQ);
  m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
  exponent = _mm256_sub_epi64(exponent, _mm256_castpd_si256(big));  // mask is -1 where big

  // int64 -> double for |e| < 2^31 via the 2^52 magic constant.
  const __m256d magic = _mm256_set1_pd(4503599627370496.0 + 2147483648.0);
  const __m256i shifted = _mm256_add_epi64(exponent, _mm256_set1_epi64x(2147483648LL));
  const __m256d ed = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(shifted, _mm256_castpd_si256(_mm256_set1_pd(4503599627370496.0)))), magic);

  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d p = _mm256_set1_pd(2.0 / 21.0);
  for (int k = 19; k >= 3; k -= 2) p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(2.0 / k));
  p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(2.0));
  const __m256d log_m = _mm256_mul_pd(p, s);

  __m256d out = _mm256_fmadd_pd(ed, _mm256_set1_pd(1.90821492927058770002e-10), log_m);
  return _mm256_fmadd_pd(ed, _mm256_set1_pd(6.93147180369123816490e-01), out);
}

double weighted_dot3(const double* w, const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(a + k)), _mm256_loadu_pd(b + k),
                           acc0);
    acc1 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + k + 4), _mm256_loadu_pd(a + k + 4)),
                           _mm256_loadu_pd(b + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4)
    acc0 = _mm256_fmadd_pd(_mm256_mul_pd(_mm256_loadu_pd(w + k), _mm256_loadu_pd(a + k)), _mm256_loadu_pd(b + k),
                           acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) sum += w[k] * a[k] * b[k];
  return sum;
}

void log_kernel(const double* x, double* out, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) _mm256_storeu_pd(out + k, log_pd(_mm256_loadu_pd(x + k)));
  for (; k < n; ++k) out[k] = std::log(x[k]);
}

void power_sums4(const double* log_x, std::size_t n, const double* exponents, double* sums) {
  __m256d acc[4] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
  __m256d neg[4];
  for (int p = 0; p < 4; ++p) neg[p] = _mm256_set1_pd(-exponents[p]);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d lx = _mm256_loadu_pd(log_x + k);
    for (int p = 0; p < 4; ++p) acc[p] = _mm256_add_pd(acc[p], exp_pd(_mm256_mul_pd(neg[p], lx)));
  }
  for (int p = 0; p < 4; ++p) {
    double s = hsum(acc[p]);
    for (std::size_t t = k; t < n; ++t) s += std::exp(-exponents[p] * log_x[t]);
    sums[p] += s;
  }
}

void poisson_q_of_log(const double* v, double* out, std::size_t n) {
  const __m256d small = _mm256_set1_pd(1e-5);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d u = exp_pd(_mm256_loadu_pd(v + k));
    const __m256d direct = _mm256_sub_pd(one, exp_pd(_mm256_sub_pd(_mm256_setzero_pd(), u)));
    // u - u^2/2 + u^3/6 for tiny u, where 1 - e^{-u} cancels.
    const __m256d series =
        _mm256_mul_pd(u, _mm256_fmadd_pd(u, _mm256_fmadd_pd(u, _mm256_set1_pd(1.0 / 6.0), _mm256_set1_pd(-0.5)), one));
    _mm256_storeu_pd(out + k, _mm256_blendv_pd(direct, series, _mm256_cmp_pd(u, small, _CMP_LT_OQ)));
  }
  for (; k < n; ++k) out[k] = -std::expm1(-std::exp(v[k]));
}

}  // namespace

const KernelTable& avx2_table_impl() {
  static const KernelTable table{"avx2", weighted_dot3, log_kernel, power_sums4, poisson_q_of_log};
  return table;
}

}  // namespace nullmodels::simd
