#pragma once

#include "stripdirac/common.hpp"

namespace sd {

/// C^2 bicubic spline interpolant on a uniform rectangular grid.
///
/// Uses a cardinal cubic B-spline representation per axis with clamped end
/// conditions; the end slopes are estimated with one-sided fourth-order
/// finite differences, so the interpolant is fourth-order accurate up to
/// and including the boundary for smooth data.
class Spline2D {
 public:
  Spline2D() = default;

  /// F has shape (ns x nt) with F(i, j) = f(s0 + i*ds, t0 + j*dt).
  /// Requires ns >= 5 and nt >= 5.
  Spline2D(double s0, double ds, double t0, double dt, const Mat& F);

  /// Evaluate the (dxs, dxt) mixed partial derivative at (s, t).
  /// Derivative orders 0, 1, 2 are supported per axis.  Points outside the
  /// grid are extrapolated with the boundary polynomial.
  double ev(double s, double t, int dxs = 0, int dxt = 0) const;

  double s_min() const { return s0_; }
  double s_max() const { return s0_ + ds_ * (ns_ - 1); }
  double t_min() const { return t0_; }
  double t_max() const { return t0_ + dt_ * (nt_ - 1); }

 private:
  double s0_ = 0, ds_ = 1, t0_ = 0, dt_ = 1;
  int ns_ = 0, nt_ = 0;
  Mat C_;  ///< B-spline coefficients, shape (ns+2) x (nt+2)
};

/// Cubic Hermite interpolant on a uniform grid with caller-supplied exact
/// slopes (C^1, fourth-order accurate for smooth data).
class Hermite1D {
 public:
  Hermite1D() = default;
  Hermite1D(double x0, double dx, Vec y, Vec yp);

  double ev(double x) const;        ///< value
  double ev_prime(double x) const;  ///< first derivative

 private:
  double x0_ = 0, dx_ = 1;
  Vec y_, yp_;
};

}  // namespace sd
