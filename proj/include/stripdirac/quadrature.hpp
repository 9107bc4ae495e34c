#pragma once

#include <vector>

#include "stripdirac/common.hpp"

namespace sd {

struct Quadrature {
  Vec x;  ///< nodes
  Vec w;  ///< weights
};

/// Gauss-Legendre rule with n nodes on [-1, 1] (Golub-Welsch).
Quadrature gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
Quadrature gauss_legendre(int n, double a, double b);

/// Composite Gauss-Legendre rule: nn nodes on each panel
/// [edges[i], edges[i+1]].
Quadrature composite_gauss(const std::vector<double>& edges, int nn);

/// Panel edges on [lo, hi] graded around a center c: spacing fine_step
/// within fine_hw of c, coarse_step outside.  Edges are clipped to
/// [lo, hi] and always include both endpoints.
std::vector<double> graded_edges(double lo, double hi, double c,
                                 double fine_hw, double fine_step,
                                 double coarse_step);

/// Uniform panel edges with n panels.
std::vector<double> uniform_edges(double lo, double hi, int n);

/// Composite Simpson weights for n equally spaced samples with spacing dx.
/// n must be odd and >= 3.
Vec simpson_weights(int n, double dx);

}  // namespace sd
