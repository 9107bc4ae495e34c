#pragma once

#include <functional>
#include <utility>

#include "stripdirac/geometry.hpp"
#include "stripdirac/interp.hpp"

namespace sd {

/// Transverse parabolic profile of the straight strip:
/// phi0(t) = (t^2 - delta^2) / 2.
double phi0(double t, double delta);

/// Finite-difference solve of the divergence-form Dirichlet problem
///   d/ds (m^{-1} du/ds) + d/dt (m du/dt) = rhs(s, t)
/// on the coordinate rectangle [-L, L] x [-delta, delta] of the tubular
/// map, with u = bc(s, t) imposed on all four edges.  Returns the ns x nt
/// grid of nodal values (row i, column j) <-> (s_i, t_j).
Mat weighted_poisson_solve(const TubularMap& map, int ns, int nt,
                           const std::function<double(double, double)>& rhs,
                           const std::function<double(double, double)>& bc);

/// Scalar potential generated by the unit magnetic field on the curved
/// strip, solved in tubular coordinates from the divergence-form equation
///   d/ds (m^{-1} dphi/ds) + d/dt (m dphi/dt) = m,
/// with phi = 0 on the strip boundary t = +-delta and the straight-strip
/// profile phi0 imposed on the artificial ends s = +-L.
class PotentialField {
 public:
  PotentialField(TubularMap map, int ns, int nt);

  const TubularMap& map() const { return map_; }
  double delta() const { return map_.delta(); }
  double L() const { return map_.curve().L(); }
  int ns() const { return ns_; }
  int nt() const { return nt_; }
  double ds() const { return ds_; }
  double dt() const { return dt_; }
  const Mat& values() const { return values_; }

  /// Mixed partial derivative of the interpolated field.
  double eval(double s, double t, int dxs = 0, int dxt = 0) const;

  /// Gradient in the physical frame (tangent/normal components rotated to
  /// fixed xy axes).
  Eigen::Vector2d grad_xy(double s, double t) const;

  /// Vector potential A = (-d2 phi, d1 phi), the counterclockwise
  /// perpendicular gradient; curl A = laplacian phi = 1.
  Eigen::Vector2d vector_potential(double s, double t) const;

  /// Outward normal derivative of phi along the two boundary edges,
  /// sampled on the s-grid.  first: edge t = +delta, second: t = -delta.
  std::pair<Vec, Vec> boundary_normal_derivative() const;

 private:
  TubularMap map_;
  int ns_, nt_;
  double ds_, dt_;
  Mat values_;
  Spline2D spline_;
};

/// Location and local shape of the minimum of the potential.
struct MinimumReport {
  double s_min = 0.0;
  double t_min = 0.0;
  double phi_min = 0.0;
  /// Twice the eigenvalues of the physical Hessian at the minimum, sorted
  /// a <= b; for the unit field they satisfy a + b = 2.
  double a = 0.0;
  double b = 0.0;
  /// Depth below the straight-strip floor: d0 = -phi_min - delta^2/2.
  double d0 = 0.0;
  bool interior = false;
  bool nondegenerate = false;
  bool unique_min = false;
  bool strictly_below_straight = false;
};

MinimumReport locate_minimum(const PotentialField& field);

}  // namespace sd
