// AVX2 variants of the dense kernels.  This translation unit is the only
// one compiled with -mavx2; callers reach it through the runtime dispatch
// in kernels.cpp, which checks CPU support first.

#if defined(__x86_64__)

#include <immintrin.h>

#include <cstddef>

namespace sd::kernels::avx2 {

bool supported() { return __builtin_cpu_supports("avx2"); }

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, _mm256_mul_pd(xv, xv)));
  }
  double lane[4];
  _mm256_storeu_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d wv = _mm256_loadu_pd(w + i);
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d yv = _mm256_loadu_pd(y + i);
    acc = _mm256_add_pd(acc, _mm256_mul_pd(wv, _mm256_mul_pd(xv, yv)));
  }
  double lane[4];
  _mm256_storeu_pd(lane, acc);
  double s = (lane[0] + lane[1]) + (lane[2] + lane[3]);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

namespace {

// Vector exp for doubles (rational approximation over a reduced argument,
// then exponent reassembly).  Arguments are clamped to the representable
// range, so out-of-range inputs saturate instead of producing inf/0
// exactly; accuracy inside the range is ~1 ulp.
inline __m256d exp_pd(__m256d x) {
  const __m256d hi = _mm256_set1_pd(709.436);
  const __m256d lo = _mm256_set1_pd(-708.396);
  const __m256d log2e = _mm256_set1_pd(1.4426950408889634073599);
  const __m256d c1 = _mm256_set1_pd(6.93145751953125e-1);
  const __m256d c2 = _mm256_set1_pd(1.42860682030941723212e-6);
  const __m256d p0 = _mm256_set1_pd(1.26177193074810590878e-4);
  const __m256d p1 = _mm256_set1_pd(3.02994407707441961300e-2);
  const __m256d p2 = _mm256_set1_pd(9.99999999999999999910e-1);
  const __m256d q0 = _mm256_set1_pd(3.00198505138664455042e-6);
  const __m256d q1 = _mm256_set1_pd(2.52448340349684104192e-3);
  const __m256d q2 = _mm256_set1_pd(2.27265548208155028766e-1);
  const __m256d q3 = _mm256_set1_pd(2.00000000000000000005e0);
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d two = _mm256_set1_pd(2.0);

  x = _mm256_min_pd(_mm256_max_pd(x, lo), hi);
  __m256d nf = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                               _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
  __m256d r = _mm256_sub_pd(x, _mm256_mul_pd(nf, c1));
  r = _mm256_sub_pd(r, _mm256_mul_pd(nf, c2));
  __m256d z = _mm256_mul_pd(r, r);
  __m256d p = _mm256_mul_pd(
      r, _mm256_add_pd(_mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(p0, z), p1),
                                     z),
                       p2));
  __m256d q = _mm256_add_pd(
      _mm256_mul_pd(
          _mm256_add_pd(
              _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(q0, z), q1), z), q2),
          z),
      q3);
  __m256d e = _mm256_div_pd(p, _mm256_sub_pd(q, p));
  __m256d res = _mm256_add_pd(one, _mm256_mul_pd(two, e));

  // Scale by 2^n via exponent-field assembly.
  __m128i n32 = _mm256_cvtpd_epi32(nf);
  __m256i n64 = _mm256_cvtepi32_epi64(n32);
  __m256i bits =
      _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
  return _mm256_mul_pd(res, _mm256_castsi256_pd(bits));
}

}  // namespace

void exp_affine(const double* x, double a, double b, double* out,
                std::size_t n) {
  const __m256d av = _mm256_set1_pd(a);
  const __m256d bv = _mm256_set1_pd(b);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d xv = _mm256_loadu_pd(x + i);
    __m256d arg = _mm256_add_pd(_mm256_mul_pd(av, xv), bv);
    _mm256_storeu_pd(out + i, exp_pd(arg));
  }
  if (i < n) {
    double tmp_in[4] = {0, 0, 0, 0}, tmp_out[4];
    for (std::size_t k = i; k < n; ++k) tmp_in[k - i] = x[k];
    __m256d xv = _mm256_loadu_pd(tmp_in);
    __m256d arg = _mm256_add_pd(_mm256_mul_pd(av, xv), bv);
    _mm256_storeu_pd(tmp_out, exp_pd(arg));
    for (std::size_t k = i; k < n; ++k) out[k] = tmp_out[k - i];
  }
}

}  // namespace sd::kernels::avx2

#endif  // __x86_64__
