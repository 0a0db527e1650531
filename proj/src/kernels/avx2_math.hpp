#pragma once

// Vectorized exp and log2 for 4 double lanes. Classic range-reduction plus
// polynomial evaluation; accuracy measured against libm in the kernel tests
// (a few ulp across the ranges the kernels feed in). This header is only
// included from the translation unit compiled with -mavx2 -mfma.

#include <immintrin.h>

namespace dimerstate::kernels::avx2 {

inline __m256d fmadd(__m256d a, __m256d b, __m256d c) {
  return _mm256_fmadd_pd(a, b, c);
}

/// exp(x). Underflows to +0 below ~-745.1; inputs above 709 are clamped
/// (the kernels never produce them).
inline __m256d exp_pd(__m256d x) {
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d ln2_hi = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d one = _mm256_set1_pd(1.0);

  const __m256d underflow =
      _mm256_cmp_pd(x, _mm256_set1_pd(-745.2), _CMP_LT_OQ);
  __m256d xc = _mm256_max_pd(x, _mm256_set1_pd(-745.2));
  xc = _mm256_min_pd(xc, _mm256_set1_pd(709.0));

  // k = round(x / ln 2); r = x - k ln 2 via the split constant.
  const __m256d k = _mm256_round_pd(
      _mm256_mul_pd(xc, log2e), _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_fnmadd_pd(k, ln2_hi, xc);
  r = _mm256_fnmadd_pd(k, ln2_lo, r);
  const __m256d r2 = _mm256_mul_pd(r, r);

  // e^r = 1 + 2 r P(r^2) / (Q(r^2) - r P(r^2)) on |r| <= ln(2)/2.
  __m256d p = _mm256_set1_pd(1.26177193074810590878e-4);
  p = fmadd(p, r2, _mm256_set1_pd(3.02994407707441961300e-2));
  p = fmadd(p, r2, _mm256_set1_pd(9.99999999999999999910e-1));
  p = _mm256_mul_pd(p, r);
  __m256d q = _mm256_set1_pd(3.00198505138664455042e-6);
  q = fmadd(q, r2, _mm256_set1_pd(2.52448340349684104192e-3));
  q = fmadd(q, r2, _mm256_set1_pd(2.27265548208155028766e-1));
  q = fmadd(q, r2, _mm256_set1_pd(2.0));
  const __m256d expr = fmadd(
      _mm256_set1_pd(2.0), _mm256_div_pd(p, _mm256_sub_pd(q, p)), one);

  // Scale by 2^k in two halves so results stay correct down into the
  // subnormal range.
  const __m128i ki = _mm256_cvtpd_epi32(k);
  const __m128i k1 = _mm_srai_epi32(ki, 1);
  const __m128i k2 = _mm_sub_epi32(ki, k1);
  const __m128i bias = _mm_set1_epi32(1023);
  const __m256d s1 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_cvtepi32_epi64(_mm_add_epi32(k1, bias)), 52));
  const __m256d s2 = _mm256_castsi256_pd(
      _mm256_slli_epi64(_mm256_cvtepi32_epi64(_mm_add_epi32(k2, bias)), 52));

  const __m256d result = _mm256_mul_pd(_mm256_mul_pd(expr, s1), s2);
  return _mm256_andnot_pd(underflow, result);
}

/// log2(x) for normal positive x. Callers mask zero/negative lanes.
inline __m256d log2_pd(__m256d x) {
  const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
  const __m256i half_bits = _mm256_set1_epi64x(0x3FE0000000000000LL);
  const __m256d one = _mm256_set1_pd(1.0);

  // x = m 2^e with m in [0.5, 1).
  const __m256i xi = _mm256_castpd_si256(x);
  const __m256i biased = _mm256_srli_epi64(xi, 52);
  __m256d m = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(xi, mant_mask), half_bits));
  // int64 -> double for small nonnegative values via the 2^52 trick.
  const __m256d magic = _mm256_set1_pd(4503599627370496.0);
  __m256d e = _mm256_sub_pd(
      _mm256_castsi256_pd(
          _mm256_or_si256(biased, _mm256_castpd_si256(magic))),
      magic);
  e = _mm256_sub_pd(e, _mm256_set1_pd(1022.0));

  // Move m into [sqrt(1/2), sqrt(2)).
  const __m256d sqrt_half = _mm256_set1_pd(0.70710678118654752440);
  const __m256d lt = _mm256_cmp_pd(m, sqrt_half, _CMP_LT_OQ);
  m = _mm256_blendv_pd(m, _mm256_add_pd(m, m), lt);
  e = _mm256_sub_pd(e, _mm256_and_pd(lt, one));

  // ln m = 2 atanh(t), t = (m-1)/(m+1), |t| <= 3 - 2 sqrt(2).
  const __m256d t = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
  const __m256d t2 = _mm256_mul_pd(t, t);
  __m256d poly = _mm256_set1_pd(1.0 / 21.0);
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 19.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 17.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 15.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 13.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 11.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 9.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 7.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 5.0));
  poly = fmadd(poly, t2, _mm256_set1_pd(1.0 / 3.0));
  poly = fmadd(poly, t2, one);
  const __m256d ln_m = _mm256_mul_pd(_mm256_add_pd(t, t), poly);

  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  return fmadd(ln_m, log2e, e);
}

}  // namespace dimerstate::kernels::avx2
