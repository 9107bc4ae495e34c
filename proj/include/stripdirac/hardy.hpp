#pragma once

#include <functional>
#include <string>

#include "stripdirac/common.hpp"

namespace sd::hardy {

/// Element of the straight-strip Hardy space H^2(S_delta) represented by
/// Fourier samples uhat(xi_j) on a symmetric quadrature grid.  All norms
/// and evaluations are quadratures against the same samples, so they are
/// mutually consistent by construction.  Value semantics; immutable use.
struct StripHardyElement {
  double delta = 0.0;
  Vec xi;     ///< quadrature nodes, symmetric about 0
  Vec w;      ///< quadrature weights
  CVec uhat;  ///< Fourier samples at the nodes

  void validate() const;

  /// Weighted spectral mass  int e^{2 delta |xi|} |uhat|^2.
  double weighted_mass() const;

  /// Conservative truncation indicator: the weighted spectral mass carried
  /// by the outermost 10% of the grid on each side.  Small iff the element
  /// is comfortably band-limited inside the grid; identically-supported
  /// edge data flags itself even when the quadrature happens to be exact.
  double decay_certificate() const;
};

/// Build an element by sampling a closed-form Fourier profile on an
/// n-point Gauss-Legendre grid over [-xi_max, xi_max].
StripHardyElement make_element(double delta, double xi_max, int n,
                               const std::function<cplx(double)>& uhat_fn);

/// a*u + b*v on the common grid (throws ConfigError on grid mismatch).
StripHardyElement combine(const StripHardyElement& u,
                          const StripHardyElement& v, cplx a, cplx b);

/// Boundary-trace norm ||T u||_{L^2(boundary)}:
/// sqrt( int (e^{2 delta xi} + e^{-2 delta xi}) |uhat|^2 ).
double trace_norm(const StripHardyElement& u, double decay_tol = 1e-8);

/// Interior norm ||u||_{L^2(S_delta)} via the sinh kernel
/// delta * (e^{2 xi delta} - e^{-2 xi delta}) / (2 xi delta); the removable
/// singularity at xi = 0 is evaluated by series.
double interior_norm(const StripHardyElement& u, double decay_tol = 1e-8);

/// M(u) = sup_y ||u(. + i y)||_{L^2(R)}; the supremum of the convex
/// y-integral sits at y = +-delta.
double m_norm(const StripHardyElement& u, double decay_tol = 1e-8);

/// k-th complex derivative at z0 = x0 + i y0 (|y0| < delta) by the inverse
/// unitary Fourier transform of xi^k e^{-y0 xi} uhat.
cplx evaluate(const StripHardyElement& u, cplx z0, int k);

/// Cauchy-estimate constant sqrt((2k)! / (2^{2k+1} pi)); the bound is
/// |u^(k)(z0)| <= const * dist(z0, boundary)^{-(2k+1)/2} * ||T u||.
double cauchy_constant(int k);

/// Dilation u_eps(x) = u((1-eps) x): exact grid rescale
/// (xi, w, uhat) -> ((1-eps) xi, (1-eps) w, uhat / (1-eps)); the element
/// then lives in the wider strip of half-width delta / (1-eps).
StripHardyElement dilate(const StripHardyElement& u, double eps);

/// JSON round-trip of the sample grid (test fixtures).
std::string to_json_string(const StripHardyElement& u);
StripHardyElement element_from_json(const std::string& text);

}  // namespace sd::hardy
