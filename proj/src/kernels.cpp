#include "stripdirac/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <cstring>

namespace sd::kernels {

double weighted_sumsq_scalar(const double* w, const double* x,
                             std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * x[i];
  return acc;
}

double weighted_dot_scalar(const double* w, const double* x, const double* y,
                           std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += w[i] * x[i] * y[i];
  return acc;
}

void exp_affine_scalar(const double* x, double a, double b, double* out,
                       std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(a * x[i] + b);
}

#if defined(__x86_64__)
namespace avx2 {
bool supported();
double weighted_sumsq(const double* w, const double* x, std::size_t n);
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);
void exp_affine(const double* x, double a, double b, double* out,
                std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__) || defined(__ARM_NEON)
namespace neon {
double weighted_sumsq(const double* w, const double* x, std::size_t n);
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);
void exp_affine(const double* x, double a, double b, double* out,
                std::size_t n);
}  // namespace neon
#endif

namespace {

Backend choose_backend() {
  const char* env = std::getenv("STRIPDIRAC_SIMD");
  bool want_scalar = env && std::strcmp(env, "scalar") == 0;
  bool want_avx2 = env && std::strcmp(env, "avx2") == 0;
  bool want_neon = env && std::strcmp(env, "neon") == 0;
  if (want_scalar) return Backend::kScalar;
#if defined(__x86_64__)
  if ((!env || std::strcmp(env, "auto") == 0 || want_avx2) &&
      avx2::supported())
    return Backend::kAvx2;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
  if (!env || std::strcmp(env, "auto") == 0 || want_neon)
    return Backend::kNeon;
#endif
  (void)want_avx2;
  (void)want_neon;
  return Backend::kScalar;
}

}  // namespace

Backend active_backend() {
  static const Backend b = choose_backend();
  return b;
}

const char* backend_name(Backend b) {
  switch (b) {
    case Backend::kAvx2:
      return "avx2";
    case Backend::kNeon:
      return "neon";
    default:
      return "scalar";
  }
}

double weighted_sumsq(const double* w, const double* x, std::size_t n) {
  switch (active_backend()) {
#if defined(__x86_64__)
    case Backend::kAvx2:
      return avx2::weighted_sumsq(w, x, n);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::kNeon:
      return neon::weighted_sumsq(w, x, n);
#endif
    default:
      return weighted_sumsq_scalar(w, x, n);
  }
}

double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n) {
  switch (active_backend()) {
#if defined(__x86_64__)
    case Backend::kAvx2:
      return avx2::weighted_dot(w, x, y, n);
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::kNeon:
      return neon::weighted_dot(w, x, y, n);
#endif
    default:
      return weighted_dot_scalar(w, x, y, n);
  }
}

void exp_affine(const double* x, double a, double b, double* out,
                std::size_t n) {
  switch (active_backend()) {
#if defined(__x86_64__)
    case Backend::kAvx2:
      avx2::exp_affine(x, a, b, out, n);
      return;
#endif
#if defined(__aarch64__) || defined(__ARM_NEON)
    case Backend::kNeon:
      neon::exp_affine(x, a, b, out, n);
      return;
#endif
    default:
      exp_affine_scalar(x, a, b, out, n);
  }
}

}  // namespace sd::kernels
