// NEON variants of the dense kernels for AArch64 builds.  The reductions
// use 2-wide double lanes; exp_affine performs the affine map in NEON and
// evaluates exp through libm per lane, which keeps results bit-compatible
// with the scalar path.

#if defined(__aarch64__) || defined(__ARM_NEON)

#include <arm_neon.h>

#include <cmath>
#include <cstddef>

namespace sd::kernels::neon {

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t wv = vld1q_f64(w + i);
    float64x2_t xv = vld1q_f64(x + i);
    acc = vaddq_f64(acc, vmulq_f64(wv, vmulq_f64(xv, xv)));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += w[i] * x[i] * x[i];
  return s;
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t wv = vld1q_f64(w + i);
    float64x2_t xv = vld1q_f64(x + i);
    float64x2_t yv = vld1q_f64(y + i);
    acc = vaddq_f64(acc, vmulq_f64(wv, vmulq_f64(xv, yv)));
  }
  double s = vgetq_lane_f64(acc, 0) + vgetq_lane_f64(acc, 1);
  for (; i < n; ++i) s += w[i] * x[i] * y[i];
  return s;
}

void exp_affine(const double* x, double a, double b, double* out,
                std::size_t n) {
  float64x2_t av = vdupq_n_f64(a);
  float64x2_t bv = vdupq_n_f64(b);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t arg = vaddq_f64(vmulq_f64(av, vld1q_f64(x + i)), bv);
    out[i] = std::exp(vgetq_lane_f64(arg, 0));
    out[i + 1] = std::exp(vgetq_lane_f64(arg, 1));
  }
  for (; i < n; ++i) out[i] = std::exp(a * x[i] + b);
}

}  // namespace sd::kernels::neon

#endif  // __aarch64__ || __ARM_NEON
