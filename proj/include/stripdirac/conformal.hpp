#pragma once

#include <complex>
#include <utility>

#include "stripdirac/geometry.hpp"
#include "stripdirac/interp.hpp"

namespace sd {

/// Conformal straightening of the curved strip.  The harmonic conjugate
/// pair (alpha, beta) maps the tubular coordinate rectangle onto the
/// straight strip R x (-delta, delta):
///   beta solves the weighted Laplace equation with beta = t on the whole
///   boundary, and alpha is recovered from the Cauchy-Riemann system
///     alpha_s = m beta_t,   alpha_t = -beta_s / m
/// by path integration from the center of the rectangle.  In the physical
/// frame the map  F = alpha + i beta  composed with the tubular chart is
/// holomorphic with derivative
///   F'(z) = e^{-i theta(s)} (beta_t + i beta_s / m).
class Biholomorphism {
 public:
  /// ns, nt: solver grid resolution (forced odd so that the center lines
  /// s = 0 and t = 0 used for the path integration are grid lines).
  Biholomorphism(TubularMap map, int ns, int nt);

  const TubularMap& map() const { return map_; }
  double delta() const { return map_.delta(); }
  double L() const { return map_.curve().L(); }
  int ns() const { return ns_; }
  int nt() const { return nt_; }

  double beta(double s, double t, int dxs = 0, int dxt = 0) const;
  double alpha(double s, double t, int dxs = 0, int dxt = 0) const;

  /// F(s, t) = alpha + i beta, the straightened coordinate.
  cplx f(double s, double t) const;

  /// Complex derivative of F with respect to the physical coordinate
  /// z = Gamma(s) + t n(s).
  cplx fprime(double s, double t) const;

  /// Invert F by damped Newton iteration: given zeta in the straight
  /// strip, find (s, t) with F(s, t) = zeta.
  std::pair<double, double> inverse(cplx zeta) const;

  /// Max Cauchy-Riemann defect |alpha_s - m beta_t| sampled off the
  /// construction lines (a genuine consistency residual: the second
  /// relation is enforced by the construction itself).
  double cr_residual() const { return cr_res_; }

  /// Max circulation of the reconstructed differential around decimated
  /// grid cells; measures path dependence of the alpha integral.
  double loop_residual() const { return loop_res_; }

  /// Max |beta - t| over the solver grid.
  double beta_deviation() const { return beta_dev_; }

  /// C^1 distance to the identity:  max |F - (s + i t)| plus the max
  /// deviation of the Jacobian from the identity, sampled on a coarse
  /// evaluation grid.
  double c1_deviation() const;

  /// sup |F'| and sup |(F^{-1})'| = 1 / min |F'| over the grid.
  double sup_fprime() const { return sup_fp_; }
  double sup_finv_prime() const { return sup_fpinv_; }

 private:
  TubularMap map_;
  int ns_, nt_;
  double ds_, dt_;
  Mat bvals_, avals_;
  Spline2D spb_, spa_;
  double cr_res_ = 0.0, loop_res_ = 0.0, beta_dev_ = 0.0;
  double sup_fp_ = 0.0, sup_fpinv_ = 0.0;
};

/// Derivative chain at the potential minimum for the disk uniformization:
/// the straight strip maps to the unit disk by w = tanh(pi zeta / (4
/// delta)), followed by the Moebius automorphism centered at w0, the image
/// of the minimum.  g is the inverse of the composite map Omega -> D, and
/// |g'(0)| controls every constant downstream.
struct DiskMapData {
  cplx f_min;            ///< F at the minimum
  cplx fp_min;           ///< F' at the minimum
  cplx w0;               ///< image of the minimum in the unit disk
  double mobius_factor;  ///< 1 - |w0|^2
  double sigma_factor;   ///< (4 delta / pi) / |1 - w0^2|
  double g0_abs;         ///< |g'(0)|
  double dist_min;       ///< distance of the minimum to the boundary
  bool koebe_ok;         ///< g0_abs within [dist_min / 2, 2 dist_min]
};

DiskMapData disk_derivative(const Biholomorphism& bih, double s_min,
                            double t_min);

/// Pullback data of the composite map at a strip point: u = position in
/// the unit disk, chi = principal square root of the derivative of the
/// full chain D -> Omega evaluated through the point (the half-order
/// weight that makes monomial pullbacks isometric).
struct ChainPoint {
  cplx u;
  cplx chi;
};

class DiskChain {
 public:
  DiskChain(const Biholomorphism& bih, double s_min, double t_min);

  ChainPoint uv(double s, double t) const;

  /// Moebius image of the strip end w = side (side = +-1): the boundary
  /// point of the unit disk the corresponding strip end is sent to.
  cplx end_point(int side) const;

  const DiskMapData& data() const { return data_; }
  double delta() const { return bih_.delta(); }
  const Biholomorphism& bih() const { return bih_; }
  double s_ref() const { return s_ref_; }
  double t_ref() const { return t_ref_; }

 private:
  const Biholomorphism& bih_;
  double s_ref_, t_ref_;
  DiskMapData data_;
};

}  // namespace sd
