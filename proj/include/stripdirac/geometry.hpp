#pragma once

#include <utility>

#include "stripdirac/common.hpp"
#include "stripdirac/interp.hpp"

namespace sd {

/// Curvature profile of the strip's spine: a Gaussian bump multiplied by a
/// smooth compactly supported cutoff,
///   kappa(s) = amp * exp(-(s/w)^2) * step((L0 - |s|) / ramp),
/// where step is the standard C-infinity transition equal to 0 for u <= 0
/// and 1 for u >= 1.  The curvature vanishes identically for |s| >= L0 and
/// equals the pure Gaussian for |s| <= L0 - ramp.  Requires L0 >= ramp so
/// the profile is smooth at s = 0.
struct CurveProfile {
  double amp = 0.0;
  double w = 1.0;
  double L0 = 1.0;
  double ramp = 1.0;

  void validate() const;
  double kappa(double s) const;
  double kappa_prime(double s) const;
};

/// Arc-length parametrized planar curve gamma : [-L, L] -> R^2 with
/// gamma(0) = 0 and horizontal tangent at s = 0.  The tangent angle theta
/// and position are tabulated once with a fourth-order integrator and
/// interpolated with Hermite polynomials using the exact slopes
/// theta' = kappa and gamma' = (cos theta, sin theta).
class Curve {
 public:
  Curve(const CurveProfile& profile, double L);

  double L() const { return L_; }
  const CurveProfile& profile() const { return profile_; }

  double kappa(double s) const { return profile_.kappa(s); }
  double kappa_prime(double s) const { return profile_.kappa_prime(s); }
  double theta(double s) const;
  Eigen::Vector2d gamma(double s) const;
  Eigen::Vector2d tangent(double s) const;  ///< (cos theta, sin theta)
  Eigen::Vector2d normal(double s) const;   ///< (-sin theta, cos theta)

  double max_abs_kappa() const { return max_abs_kappa_; }

 private:
  CurveProfile profile_;
  double L_;
  Hermite1D theta_tab_, gx_tab_, gy_tab_;
  double max_abs_kappa_ = 0.0;
};

/// Tubular coordinates (s, t) -> gamma(s) + t * normal(s) on the strip
/// [-L, L] x [-delta, delta].  Construction fails with AssumptionError
/// unless delta * sup|kappa| < 1, which makes the map a diffeomorphism.
class TubularMap {
 public:
  TubularMap(Curve curve, double delta);

  const Curve& curve() const { return curve_; }
  double delta() const { return delta_; }

  /// Metric factor m(s, t) = 1 - t * kappa(s); the flat measure on the
  /// strip is m ds dt and the coordinate Jacobian is diag(m, 1).
  double m(double s, double t) const;

  Eigen::Vector2d to_xy(double s, double t) const;

  /// Invert the chart by Newton iteration from the seed (s0, t0); the
  /// target must lie in the image of the coordinate rectangle.
  std::pair<double, double> invert(const Eigen::Vector2d& xy, double s0,
                                   double t0) const;

 private:
  Curve curve_;
  double delta_;
};

}  // namespace sd
