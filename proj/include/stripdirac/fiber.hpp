#pragma once

#include <utility>

#include "stripdirac/common.hpp"
#include "stripdirac/geometry.hpp"

namespace sd::fiber {

enum class Discretization { kSpectralGalerkin, kSecondOrderFD };

/// One transverse fiber problem on I = (-delta, delta): the 2x2 first-order
/// operator with momentum offset xi and semiclassical parameter h, boundary
/// coupled by psi1(+-delta) = -+ psi2(+-delta).
struct FiberSpec {
  double h = 0.1;
  double delta = 1.0;
  double xi = 0.0;
  int n = 64;    ///< Galerkin basis size (polynomial degree < n)
  int nq = 240;  ///< quadrature nodes for assembly
  Discretization disc = Discretization::kSpectralGalerkin;

  void validate() const;
};

/// Matrices of the quadratic pencil  K + lambda h B - lambda^2 M  obtained
/// by eliminating one spinor component: K is the Galerkin matrix of
/// ||(sign*h d/dt + xi + t) psi||^2, B the boundary mass at t = +-delta and
/// M the interior mass.  Roots lambda of the pencil are eigenvalues of the
/// fiber operator.
struct PencilForms {
  Mat K, B, M;
  double h = 0.0;
  bool identity_mass = false;  ///< M == I exactly (orthonormalized basis)
};

/// Legendre-basis forms; valid for either sign and any xi, but loses
/// relative accuracy on exponentially small roots.
PencilForms forms_legendre(double xi, double h, double delta, int n, int nq,
                           int sign);

/// Gauged forms for the + sign: the substitution
/// psi = exp(-(xi+t)^2 / 2h) g turns the differential factor into a pure
/// derivative; the polynomial basis for g is orthonormalized against the
/// Gaussian weight by a discrete Stieltjes recurrence, so M = I and every
/// assembled sum has positive terms.  This preserves full relative
/// precision for roots of size exp(-delta^2/h).
PencilForms forms_gauged_plus(double xi, double h, double delta, int n,
                              int nq);

/// Whether the gauged route is numerically usable (weight dynamic range
/// within cap in log scale).
bool gauge_ok(double xi, double h, double delta, double cap = 600.0);

/// Second-order-FD variant of the forms (piecewise-linear elements on a
/// uniform grid with exact elementwise integration); converges at second
/// order and serves as the discretization cross-check.
PencilForms forms_fd(double xi, double h, double delta, int n, int sign);

/// Lowest eigenvalue of K + lambda h B - lambda^2 M (the ground branch of
/// the quadratic form at fixed lambda).
double ell1(const PencilForms& f, double lambda);

/// Convenience: assemble forms for (xi, h, sign) and evaluate ell1.
double ell1(double xi, double h, double delta, double lambda, int sign,
            int n = 64, int nq = 240);

/// Ground eigenvalue mu1^sign via certified bisection on the concave root
/// function, followed by a fixed-point polish.
double mu1_via_root(double xi, double h, double delta, int sign, int n = 64,
                    int nq = 240);
double mu1_via_root(const PencilForms& f, double bracket_hi);

/// Ground eigenvalue via direct minimization of the nonlinear Rayleigh
/// functional rho (projected Newton descent with random restarts).
/// If min_vec is non-null the minimizing coefficient vector (unit M-norm)
/// is written there.
double mu1_via_rho(double xi, double h, double delta, int sign, int n = 64,
                   int nq = 240, int restarts = 5, unsigned seed = 0,
                   Vec* min_vec = nullptr);
double mu1_via_rho(const PencilForms& f, int restarts = 5, unsigned seed = 0,
                   Vec* min_vec = nullptr);

/// All pencil roots by companion linearization (QZ); returns the K smallest
/// positive and K smallest-magnitude negative eigenvalues (negatives stored
/// positive).  The ground positive root is polished through the gauged
/// route when available.
std::pair<Vec, Vec> dirac_fiber_eigs(const FiberSpec& spec, int count);

/// Gaussian upper bound nu1(xi, h): closed form via error functions,
/// evaluated in scaled form so no intermediate underflows.
double nu1(double xi, double h, double delta);

struct DispersionCurve {
  Vec xi;
  Mat pos;  ///< nxi x K, branch k in column k
  Mat neg;  ///< negative branches, stored positive
  double h = 0.0;
  double delta = 0.0;
};

/// Sweep the fiber spectra over a symmetric xi window (default
/// [-W, W], W = delta + 2 sqrt(h) + 2); parallel over xi, deterministic
/// ordering.
DispersionCurve dispersion_sweep(double h, double delta, int branches,
                                 int nxi, double window = 0.0, int n = 64,
                                 int nq = 240);

struct Threshold {
  double lambda_ess = 0.0;
  double xi_star = 0.0;
};

/// Essential-spectrum threshold of the + branch: minimize mu1^+ over
/// xi >= 0 (golden section after a coarse scan).
Threshold threshold_pos(double h, double delta, int n = 64, int nq = 240);

/// Same for the - branch; the minimizer sits near delta - sqrt(h) a0.
Threshold threshold_neg(double h, double delta, int n = 64, int nq = 240);

struct HalflineResult {
  double a0 = 0.0;       ///< root of g(lambda) on (0, sqrt(2))
  double xi_hat = 0.0;   ///< inner minimizer at lambda = a0
  double tail_mass = 0.0;  ///< ground-state mass beyond t = 8 (decay check)
};

/// Half-line model constant a0: bisection on lambda of the xi-minimized
/// lowest eigenvalue of the half-line quadratic form (unit field scale).
HalflineResult halfline_a0(double T = 14.0, int n = 110, int nq = 0);

/// Deviation of the whole-line infimum from the Landau value 2 - lambda^2.
double landau_check(double lambda, double xi, double T = 12.0, int n = 120,
                    int nq = 0);

struct ProjectorResidual {
  double mu1 = 0.0;
  double gate = 0.0;  ///< 2 sqrt(h) exp(-delta^2/h)
  bool in_window = false;
  double h1 = 0.0;      ///< H^1 distance of the minimizer to its Gaussian
                        ///  projection
  double scaled = 0.0;  ///< h1 * h^{3/2} * exp(delta^2/h)
};

/// Distance of the ground minimizer to the rank-one Gaussian model space;
/// requires xi in the exponential window (else AssumptionError).
ProjectorResidual kernel_projector_residual(double xi, double h,
                                            double delta, int n = 64,
                                            int nq = 240);

struct BoundState {
  double lambda = 0.0;        ///< min of the two candidates
  double lambda_minus = 0.0;  ///< candidate with 1 - delta*kappa
  double lambda_plus = 0.0;   ///< candidate with 1 + delta*kappa
  bool negative = false;
};

/// Ground state of the two effective curvature wells
/// D_s^2 - kappa^2 / (12 (1 -+ delta kappa)^2) on a truncated line.
BoundState curvature_bound_state(const CurveProfile& profile, double delta,
                                 double T = 40.0, int n = 4001);

/// Chebyshev collocation of the raw first-order system (cross-check route).
/// Eigenvalues are kept only if the polynomial eigenfunction's strong
/// residual on a refined grid is below res_tol.
std::pair<Vec, Vec> dirac_eigs_collocation(const FiberSpec& spec, int count,
                                           int ncheb = 80,
                                           double res_tol = 1e-6);

}  // namespace sd::fiber
