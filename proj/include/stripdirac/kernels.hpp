#pragma once

#include <cstddef>

namespace sd::kernels {

/// Dense inner-loop primitives used by the quadrature assembly code.
/// A scalar reference implementation always exists; on x86-64 an AVX2
/// variant is selected at runtime when the CPU supports it, and on
/// AArch64 a NEON variant is compiled in.  The environment variable
/// STRIPDIRAC_SIMD (values: auto, scalar, avx2, neon) overrides the
/// automatic choice; requesting an unavailable backend falls back to
/// scalar.

enum class Backend { kScalar, kAvx2, kNeon };

/// Backend that will service the calls below.
Backend active_backend();
const char* backend_name(Backend b);

/// sum_i w[i] * x[i]^2
double weighted_sumsq(const double* w, const double* x, std::size_t n);

/// sum_i w[i] * x[i] * y[i]
double weighted_dot(const double* w, const double* x, const double* y,
                    std::size_t n);

/// out[i] = exp(a * x[i] + b)
void exp_affine(const double* x, double a, double b, double* out,
                std::size_t n);

/// Scalar reference implementations (always available, used by the
/// equivalence tests).
double weighted_sumsq_scalar(const double* w, const double* x, std::size_t n);
double weighted_dot_scalar(const double* w, const double* x, const double* y,
                           std::size_t n);
void exp_affine_scalar(const double* x, double a, double b, double* out,
                       std::size_t n);

}  // namespace sd::kernels
