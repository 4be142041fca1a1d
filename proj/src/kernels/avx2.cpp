// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>

#include "twopiece/kernels.hpp"

namespace twopiece::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, v);
  return (lanes[0] + lanes[1]) + (lanes[2] + lanes[3]);
}

// |r| scaled by inv_left where r <= 0 and by inv_right elsewhere.
inline __m256d scaled_abs(__m256d r, __m256d inv_left, __m256d inv_right) {
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  const __m256d abs_r = _mm256_andnot_pd(sign_mask, r);
  const __m256d left = _mm256_cmp_pd(r, _mm256_setzero_pd(), _CMP_LE_OQ);
  return _mm256_mul_pd(abs_r, _mm256_blendv_pd(inv_right, inv_left, left));
}

// e^x for x <= 0. Cody-Waite reduction x = n ln2 + r, |r| <= ln2/2, degree-13
// Taylor polynomial. Results below the normal range flush to zero.
inline __m256d exp_nonpositive(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634074);
  const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
  const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
  x = _mm256_max_pd(x, _mm256_set1_pd(-746.0));
  const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
  r = _mm256_fnmadd_pd(n, ln2_lo, r);

  static constexpr double inv_fact[14] = {
      1.0,
      1.0,
      1.0 / 2.0,
      1.0 / 6.0,
      1.0 / 24.0,
      1.0 / 120.0,
      1.0 / 720.0,
      1.0 / 5040.0,
      1.0 / 40320.0,
      1.0 / 362880.0,
      1.0 / 3628800.0,
      1.0 / 39916800.0,
      1.0 / 479001600.0,
      1.0 / 6227020800.0};
  __m256d poly = _mm256_set1_pd(inv_fact[13]);
  for (int k = 12; k >= 0; --k) poly = _mm256_fmadd_pd(poly, r, _mm256_set1_pd(inv_fact[k]));

  // 2^n through the exponent field; valid for n >= -1022.
  const __m256d biased = _mm256_add_pd(n, _mm256_set1_pd(1023.0));
  const __m256i bits = _mm256_castpd_si256(_mm256_add_pd(biased, _mm256_set1_pd(0x1.0p52)));
  const __m256d two_n = _mm256_castsi256_pd(_mm256_slli_epi64(bits, 52));
  const __m256d result = _mm256_mul_pd(poly, two_n);
  const __m256d normal = _mm256_cmp_pd(n, _mm256_set1_pd(-1022.0), _CMP_GE_OQ);
  return _mm256_and_pd(result, normal);
}

// log(1 + u) for u in [0, 1]: 2 atanh(s), s = u / (2 + u) <= 1/3.
inline __m256d log1p_unit(__m256d u) {
  const __m256d s = _mm256_div_pd(u, _mm256_add_pd(_mm256_set1_pd(2.0), u));
  const __m256d s2 = _mm256_mul_pd(s, s);
  __m256d poly = _mm256_set1_pd(1.0 / 35.0);
  for (int k = 16; k >= 0; --k) poly = _mm256_fmadd_pd(poly, s2, _mm256_set1_pd(1.0 / (2 * k + 1)));
  return _mm256_mul_pd(_mm256_add_pd(s, s), poly);
}

void residuals_avx2(const double* y, const double* x, std::size_t n, const double* beta,
                    std::size_t k, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_loadu_pd(y + i);
    for (std::size_t j = 0; j < k; ++j) {
      acc = _mm256_fnmadd_pd(_mm256_set1_pd(beta[j]), _mm256_loadu_pd(x + j * n + i), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = y[i];
    for (std::size_t j = 0; j < k; ++j) acc = std::fma(-beta[j], x[j * n + i], acc);
    out[i] = acc;
  }
}

double sepd_power_sum_avx2(const double* r, std::size_t n, double inv_left, double inv_right,
                           int p) {
  const __m256d vl = _mm256_set1_pd(inv_left);
  const __m256d vr = _mm256_set1_pd(inv_right);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d base = scaled_abs(_mm256_loadu_pd(r + i), vl, vr);
    __m256d result = _mm256_set1_pd(1.0);
    for (int e = p; e > 0; e >>= 1) {
      if (e & 1) result = _mm256_mul_pd(result, base);
      base = _mm256_mul_pd(base, base);
    }
    acc = _mm256_add_pd(acc, result);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double a = r[i] <= 0.0 ? -r[i] * inv_left : r[i] * inv_right;
    sum += ipow(a, p);
  }
  return sum;
}

double sgld_sum_avx2(const double* r, std::size_t n, double inv_left, double inv_right) {
  const __m256d vl = _mm256_set1_pd(inv_left);
  const __m256d vr = _mm256_set1_pd(inv_right);
  const __m256d sign_mask = _mm256_set1_pd(-0.0);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = scaled_abs(_mm256_loadu_pd(r + i), vl, vr);
    const __m256d e = exp_nonpositive(_mm256_xor_pd(a, sign_mask));
    acc = _mm256_add_pd(acc, _mm256_fmadd_pd(_mm256_set1_pd(2.0), log1p_unit(e), a));
  }
  double sum = hsum(acc);
  for (; i < n; ++i) {
    const double a = r[i] <= 0.0 ? -r[i] * inv_left : r[i] * inv_right;
    sum += a + 2.0 * std::log1p(std::exp(-a));
  }
  return sum;
}

double sum_squares_avx2(const double* r, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_loadu_pd(r + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double sum = hsum(acc);
  for (; i < n; ++i) sum += r[i] * r[i];
  return sum;
}

}  // namespace

const KernelTable* avx2_table() {
  static const KernelTable table{residuals_avx2, sepd_power_sum_avx2, sgld_sum_avx2,
                                 sum_squares_avx2};
  return &table;
}

}  // namespace twopiece::kernels::detail
