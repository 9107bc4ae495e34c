#pragma once

#include <vector>

#include "stripdirac/conformal.hpp"
#include "stripdirac/potential.hpp"

namespace sd {

/// Orthogonal polynomial family of the Gaussian-weighted space of entire
/// functions: monic polynomials P_m(z), z = y1 + i y2, orthogonal under
///   <u, v> = int u(z) conj(v(z)) exp(-(a y1^2 + b y2^2) / 2) dy,
/// where a <= b are twice the Hessian eigenvalues of the potential at its
/// minimum (a + b = 2 for the unit field) and the axes are principal.
struct BargmannBasis {
  double a = 0.0, b = 0.0;
  /// coeff(m, j): coefficient of z^j in P_m; coeff(m, m) = 1 (monic).
  Mat coeff;
  /// norm[m] = N_B(P_m).
  Vec norm;
};

/// Gram-Schmidt of the monomials under tensor Gauss-Legendre quadrature on
/// a window large enough that the Gaussian tail is below roundoff.
BargmannBasis bargmann_orthogonalize(double a, double b, int M, int nq = 160);

/// Closed-form N_B(P_m) = sqrt(2 pi m! (a+b)^m / (ab)^(m+1/2)).
double bargmann_norm_closed(double a, double b, int m);

/// Closed-form monic coefficients: P_m(z) = He_m(c z) / c^m with
/// c = sqrt(ab / (b - a)) for a != b, and P_m(z) = z^m when a = b.
Vec bargmann_coeff_closed(double a, double b, int m);

/// d_B^k = N_B(P_{k-1}) / (k-1)!, in closed form.
double bargmann_dB(double a, double b, int k);

/// Boundary data of the pushed-forward disk-monomial basis b_n = chi u^n
/// on the curved strip.
struct HardyBasis {
  int M = 0;     ///< number of basis functions
  int kmax = 0;  ///< derivative orders available (rows of D)
  CMat G;        ///< boundary Gram, Hermitian, close to 2 pi I
  CMat D;        ///< D(j, n) = n-th basis function's j-th derivative at z_min
  double gram_dev = 0.0;   ///< max |G / (2 pi) - I|
  double gram_cond = 0.0;  ///< spectral condition number of G
};

/// Assemble G by composite Simpson quadrature along the two boundary
/// edges (arclength m ds) closed by the exact circular arcs joining the
/// truncated corners to the Moebius images of the strip ends, and D by a
/// trapezoid Cauchy integral on a physical circle of radius
/// 0.35 * dist_min around the reference point.
HardyBasis hardy_basis(const DiskChain& chain, double s_min, double t_min,
                       int M, int kmax = 4, int nq_boundary = 4001,
                       int nq_circle = 256);

/// Closed-form d_H^k = sqrt(2 pi) / (k-1)! * g0^(k - 1/2) from the disk
/// derivative g0 = |g'(0)|.
double dH_closed(double g0_abs, int k);

/// Least-boundary-norm interpolants: column l of v solves
///   minimize ||u||_G  s.t.  u^(j)(z_min) = delta_{jl},  j = 0..k-1;
/// value is the norm of column k-1 (the distance d_H^k).
struct HardyMinimizer {
  double value = 0.0;
  CMat v;  ///< M x k coefficient columns v_0 .. v_{k-1}
};
HardyMinimizer dH_minimized(const HardyBasis& basis, int k);

/// Projection onto span(v_0..v_{k-1}) reproducing the first k derivatives
/// at the reference point: u -> sum_l u^(l)(z_min) v_l (coefficients in
/// the same basis).
CVec hardy_taylor_project(const HardyBasis& basis, const CVec& u, int k);

/// One rung of the h ladder.
struct EffectiveEntry {
  double h = 0.0;
  /// Pencil eigenvalues of (h G, G_w) with the weight rescaled by
  /// e^{2 phi_min / h}; multiply by that factor for the physical value.
  Vec lambda_scaled;
  /// log lambda_k^eff = log(lambda_scaled) + 2 phi_min / h.
  Vec lambda_log;
  /// r_k = lambda_scaled_k * h^{k-1} / (d_H^k / d_B^k)^2.
  Vec ratio;
  bool rr_monotone = false;  ///< eigenvalues decreased when M grew from M-2
  double trunc_dev = 0.0;    ///< max rel change of lambda between M-4 and M
  /// (0,0) entry of the weighted interior Gram; its Laplace approximation
  /// is 2 pi h / sqrt(ab) * |b_0(z_min)|^2.
  double g00 = 0.0;
};

struct EffectiveReport {
  MinimumReport minimum;
  double g0_abs = 0.0;
  double gram_dev = 0.0;
  double gram_cond = 0.0;
  int M = 0;
  int k_max = 0;
  std::vector<double> dh;      ///< d_H^k, k = 1..k_max (closed form)
  std::vector<double> dh_min;  ///< d_H^k by constrained minimization
  std::vector<double> db;      ///< d_B^k, k = 1..k_max
  std::vector<EffectiveEntry> entries;
  bool assumption_ok = false;
};

/// Weighted-pencil eigenvalues over the h ladder.  The interior Gram uses
/// graded Gauss panels concentrated at the minimum; with
/// synthetic_quadratic the weight exponent 2(phi - phi_min) is replaced by
/// its exact Hessian quadratic (constants validation mode).  Throws
/// AssumptionError unless the minimum is interior, nondegenerate, unique
/// and strictly below the straight-strip floor.
EffectiveReport lambda_eff(const PotentialField& field,
                           const Biholomorphism& bih,
                           const std::vector<double>& h_ladder, int k_max = 3,
                           int M = 14, bool synthetic_quadratic = false,
                           int nq_boundary = 4001, int nq_circle = 256);

/// Gap location of the effective levels against the essential-spectrum
/// threshold at the same h (entry idx of the report).
struct GapEntry {
  double h = 0.0;
  double threshold_log = 0.0;
  double margin_log = 0.0;  ///< threshold_log - lambda_1_log
  int in_gap = 0;           ///< # effective levels below the threshold
};
GapEntry gap_report(const EffectiveReport& rep, int idx,
                    double lambda_ess_pos);

/// Residual of the supersymmetric intertwining identity on basis element
/// n: with w = e^{-phi/h} b_n and A = perp-gradient of phi,
///   (-2ih d/dzbar - A_1 - i A_2) w = 0
/// for holomorphic b_n.  Evaluated by centered differences of step `step`
/// at a ring of interior points around the minimum; returns the max
/// modulus relative to the local scale of w.
double intertwining_residual(const PotentialField& field,
                             const DiskChain& chain, double h, int n,
                             double step);

}  // namespace sd
