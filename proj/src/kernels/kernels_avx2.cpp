// AVX2 variants of the batch kernels. Compiled with -mavx2 -mfma; the
// dispatcher only hands out this backend when the CPU reports both. No
// vector code may run before that check, so all constants live inside the
// functions (file-scope __m256d would execute AVX at static-init time).

#if defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

#include <cstddef>

#include "dimerstate/kernels.hpp"
#include "kernels/avx2_math.hpp"

namespace dimerstate::kernels {

namespace {

using avx2::exp_pd;
using avx2::fmadd;
using avx2::log2_pd;

/// x log2 x with lanes below the 0 log 0 guard threshold forced to zero.
inline __m256d xlog2_pd(__m256d x) {
  const __m256d tiny = _mm256_set1_pd(1e-300);
  const __m256d live = _mm256_cmp_pd(x, tiny, _CMP_GE_OQ);
  const __m256d safe = _mm256_max_pd(x, tiny);
  return _mm256_and_pd(live, _mm256_mul_pd(x, log2_pd(safe)));
}

inline __m256d correlation_vec(double j_kelvin, __m256d temps) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d j = _mm256_set1_pd(j_kelvin);
  if (j_kelvin <= 0.0) {
    const __m256d r = exp_pd(_mm256_div_pd(j, temps));
    return _mm256_div_pd(_mm256_sub_pd(r, one), fmadd(three, r, one));
  }
  const __m256d q =
      exp_pd(_mm256_div_pd(_mm256_sub_pd(_mm256_setzero_pd(), j), temps));
  return _mm256_div_pd(_mm256_sub_pd(one, q), _mm256_add_pd(three, q));
}

inline __m256d discord_vec(__m256d c) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d three = _mm256_set1_pd(3.0);
  const __m256d quarter = _mm256_set1_pd(0.25);
  const __m256d abs_mask =
      _mm256_castsi256_pd(_mm256_set1_epi64x(0x7FFFFFFFFFFFFFFFLL));

  const __m256d lam_s =
      _mm256_mul_pd(quarter, _mm256_sub_pd(one, _mm256_mul_pd(three, c)));
  const __m256d lam_t = _mm256_mul_pd(quarter, _mm256_add_pd(one, c));
  const __m256d mi =
      _mm256_add_pd(_mm256_set1_pd(2.0),
                    fmadd(three, xlog2_pd(lam_t), xlog2_pd(lam_s)));

  const __m256d a = _mm256_and_pd(c, abs_mask);
  const __m256d cc = _mm256_mul_pd(
      _mm256_set1_pd(0.5), _mm256_add_pd(xlog2_pd(_mm256_add_pd(one, a)),
                                         xlog2_pd(_mm256_sub_pd(one, a))));
  return _mm256_sub_pd(mi, cc);
}

inline __m256d eof_vec(__m256d c) {
  const __m256d zero = _mm256_setzero_pd();
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d half = _mm256_set1_pd(0.5);

  const __m256d pre = _mm256_mul_pd(_mm256_set1_pd(-0.5),
                                    fmadd(_mm256_set1_pd(3.0), c, one));
  const __m256d conc = _mm256_max_pd(pre, zero);
  const __m256d s =
      _mm256_sqrt_pd(_mm256_max_pd(zero, _mm256_fnmadd_pd(conc, conc, one)));
  const __m256d lam_p = _mm256_mul_pd(half, _mm256_add_pd(one, s));
  const __m256d lam_m = _mm256_mul_pd(half, _mm256_sub_pd(one, s));
  return _mm256_sub_pd(zero, _mm256_add_pd(xlog2_pd(lam_p), xlog2_pd(lam_m)));
}

/// Run a 4-lane map over an array, padding the tail through a scratch
/// vector so every element goes through the identical instruction sequence.
template <typename VecFn>
void map_pd(VecFn&& fn, const double* in, double* out, std::size_t n,
            double pad) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4)
    _mm256_storeu_pd(out + i, fn(_mm256_loadu_pd(in + i)));
  if (i < n) {
    alignas(32) double buf[4] = {pad, pad, pad, pad};
    for (std::size_t k = i; k < n; ++k) buf[k - i] = in[k];
    alignas(32) double res[4];
    _mm256_store_pd(res, fn(_mm256_load_pd(buf)));
    for (std::size_t k = i; k < n; ++k) out[k] = res[k - i];
  }
}

void correlation_vs_temperature_avx2(double j_kelvin, const double* temps,
                                     double* c, std::size_t n) {
  map_pd([&](__m256d t) { return correlation_vec(j_kelvin, t); }, temps, c, n,
         1.0);
}

void discord_avx2(const double* c, double* q, std::size_t n) {
  map_pd([](__m256d v) { return discord_vec(v); }, c, q, n, 0.0);
}

void eof_avx2(const double* c, double* e, std::size_t n) {
  map_pd([](__m256d v) { return eof_vec(v); }, c, e, n, 0.0);
}

constexpr Backend kAvx2{"avx2", correlation_vs_temperature_avx2, discord_avx2,
                        eof_avx2};

}  // namespace

const Backend& avx2_backend() { return kAvx2; }

}  // namespace dimerstate::kernels

#endif  // __AVX2__ && __FMA__
