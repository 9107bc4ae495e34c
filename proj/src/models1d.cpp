// One-dimensional model problems attached to the fiber analysis: the
// half-line constant a0, the whole-line Landau check, and the effective
// curvature wells.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Eigenvalues>

#include "stripdirac/fiber.hpp"
#include "stripdirac/quadrature.hpp"

namespace sd::fiber {

namespace {

void legendre_table_line(const Vec& x, int n, Mat& V, Mat& D) {
  int m = static_cast<int>(x.size());
  V.resize(m, n);
  D.resize(m, n);
  V.col(0).setOnes();
  D.col(0).setZero();
  if (n > 1) {
    V.col(1) = x;
    D.col(1).setConstant(1.0);
  }
  for (int j = 1; j + 1 < n; ++j) {
    V.col(j + 1) = ((2.0 * j + 1.0) * x.cwiseProduct(V.col(j)) -
                    static_cast<double>(j) * V.col(j - 1)) /
                   (j + 1.0);
    D.col(j + 1) = D.col(j - 1) + (2.0 * j + 1.0) * V.col(j);
  }
}

std::pair<double, double> golden_min1(const std::function<double(double)>& f,
                                      double a, double b, int iters,
                                      double xtol) {
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters && (b - a) > xtol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  double xm = 0.5 * (a + b);
  return {xm, f(xm)};
}

// Precomputed half-line discretization: basis (1-x) P_j(x) on [0, T]
// (Dirichlet at the truncation end, free at 0).
struct HalflineDisc {
  Vec t, w;
  Mat V;           // basis values at nodes
  Vec V0;          // basis values at t = 0
  Mat K0, C, M;    // K(xi) = K0 + xi (C + C^T) + xi^2 M
  Mat B;           // boundary form at t = 0
};

HalflineDisc halfline_disc(double T, int n, int nq) {
  HalflineDisc d;
  Quadrature q = gauss_legendre(nq, 0.0, T);
  d.t = q.x;
  d.w = q.w;
  Vec x = (2.0 / T) * q.x - Vec::Ones(nq);
  Mat P, Pd;
  legendre_table_line(x, n, P, Pd);
  d.V = (Vec::Ones(nq) - x).asDiagonal() * P;
  Mat D = ((Vec::Ones(nq) - x).asDiagonal() * Pd - P) * (2.0 / T);
  Vec xe(1);
  xe << -1.0;
  Mat Pe, Pde;
  legendre_table_line(xe, n, Pe, Pde);
  d.V0 = 2.0 * Pe.row(0).transpose();

  Mat E0 = -D + d.t.asDiagonal() * d.V;
  Mat W = d.w.asDiagonal();
  d.K0 = E0.transpose() * W * E0;
  d.C = E0.transpose() * W * d.V;
  d.M = d.V.transpose() * W * d.V;
  d.B = d.V0 * d.V0.transpose();
  return d;
}

// Lowest eigenvalue of the half-line form at (lambda, xi); writes the
// minimizing coefficient vector when vec != nullptr.
double halfline_e1(const HalflineDisc& d, double lambda, double xi,
                   Vec* vec = nullptr) {
  Mat K = d.K0 + xi * (d.C + d.C.transpose()) + (xi * xi) * d.M;
  Mat A = K + lambda * d.B - (lambda * lambda) * d.M;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es;
  if (vec == nullptr) {
    es.compute(A, d.M, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  } else {
    es.compute(A, d.M);
  }
  if (es.info() != Eigen::Success)
    throw SolverError("halfline: eigensolver failed");
  if (vec != nullptr) *vec = es.eigenvectors().col(0);
  return es.eigenvalues()(0);
}

std::pair<double, double> halfline_g(const HalflineDisc& d, double lambda) {
  const double xlo = -4.0, xhi = 1.0;
  const int nscan = 41;
  int best = 0;
  double bv = std::numeric_limits<double>::infinity();
  for (int i = 0; i < nscan; ++i) {
    double xi = xlo + (xhi - xlo) * i / (nscan - 1);
    double v = halfline_e1(d, lambda, xi);
    if (v < bv) {
      bv = v;
      best = i;
    }
  }
  double a = xlo + (xhi - xlo) * std::max(best - 1, 0) / (nscan - 1);
  double b = xlo + (xhi - xlo) * std::min(best + 1, nscan - 1) / (nscan - 1);
  auto [xm, vm] = golden_min1(
      [&](double xi) { return halfline_e1(d, lambda, xi); }, a, b, 60, 1e-9);
  if (vm < bv) return {vm, xm};
  return {bv, xlo + (xhi - xlo) * best / (nscan - 1)};
}

}  // namespace

HalflineResult halfline_a0(double T, int n, int nq) {
  if (T < 12.0)
    throw ConfigError("halfline: truncation T must be at least 12");
  if (nq <= 0) nq = static_cast<int>(2.6 * n);
  HalflineDisc d = halfline_disc(T, n, nq);

  double lo = 0.3, hi = 1.41;
  auto [glo, xlo_] = halfline_g(d, lo);
  auto [ghi, xhi_] = halfline_g(d, hi);
  (void)xlo_;
  (void)xhi_;
  if (!(glo > 0.0) || !(ghi < 0.0))
    throw SolverError("halfline: no sign change for a0 in (0.3, 1.41)");
  for (int it = 0; it < 30; ++it) {
    double mid = 0.5 * (lo + hi);
    auto [gm, xm] = halfline_g(d, mid);
    (void)xm;
    if (gm > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  HalflineResult res;
  res.a0 = 0.5 * (lo + hi);
  auto [gfin, xi_hat] = halfline_g(d, res.a0);
  (void)gfin;
  res.xi_hat = xi_hat;

  // Decay of the ground state: mass beyond t = 8.
  Vec coeff;
  halfline_e1(d, res.a0, res.xi_hat, &coeff);
  Vec u = d.V * coeff;
  double total = 0.0, tail = 0.0;
  for (int i = 0; i < d.t.size(); ++i) {
    double m = d.w[i] * u[i] * u[i];
    total += m;
    if (d.t[i] > 8.0) tail += m;
  }
  res.tail_mass = tail / total;
  return res;
}

double landau_check(double lambda, double xi, double T, int n, int nq) {
  if (lambda < 0.0) throw ConfigError("landau: lambda must be >= 0");
  if (nq <= 0) nq = static_cast<int>(2.6 * n);
  Quadrature q = gauss_legendre(nq, -xi - T, -xi + T);
  Vec x = (q.x.array() + xi).matrix() / T;
  Mat P, Pd;
  legendre_table_line(x, n, P, Pd);
  // Dirichlet truncation: u = (1 - x^2) p.
  Vec cut = (Vec::Ones(nq) - x.cwiseAbs2());
  Mat U = cut.asDiagonal() * P;
  Mat Ud = (cut.asDiagonal() * Pd - 2.0 * x.asDiagonal() * P) * (1.0 / T);
  Mat E = -Ud + (q.x.array() + xi).matrix().asDiagonal() * U;
  Mat W = q.w.asDiagonal();
  Mat K = E.transpose() * W * E;
  Mat M = U.transpose() * W * U;
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(K, M);
  if (es.info() != Eigen::Success)
    throw SolverError("landau: eigensolver failed");

  // Truncation control: the ground state must not touch the ends.
  Vec u = U * es.eigenvectors().col(0);
  double total = 0.0, edge = 0.0;
  for (int i = 0; i < nq; ++i) {
    double m = q.w[i] * u[i] * u[i];
    total += m;
    if (std::abs(x[i]) > 0.9) edge += m;
  }
  if (edge / total > 1e-8)
    throw SolverError("landau: truncation too small (boundary mass)");

  double e1 = es.eigenvalues()(0);
  return (e1 - lambda * lambda) - (2.0 - lambda * lambda);
}

BoundState curvature_bound_state(const CurveProfile& profile, double delta,
                                 double T, int n) {
  profile.validate();
  if (delta < 0.0) throw ConfigError("bound state: delta must be >= 0");
  if (n < 64) throw ConfigError("bound state: grid too coarse");
  if (T <= profile.L0)
    throw ConfigError("bound state: truncation must exceed the support");

  auto lowest = [&](double side) {
    // side = -1: well 1/(1 - delta kappa)^2; side = +1: 1/(1 + delta kappa)^2
    double ds = 2.0 * T / (n - 1);
    int ni = n - 2;
    Vec diag(ni), sub(ni - 1);
    for (int i = 0; i < ni; ++i) {
      double s = -T + (i + 1) * ds;
      double k = profile.kappa(s);
      double denom = 1.0 + side * delta * k;
      diag[i] = 2.0 / (ds * ds) - k * k / (12.0 * denom * denom);
      if (i + 1 < ni) sub[i] = -1.0 / (ds * ds);
    }
    Eigen::SelfAdjointEigenSolver<Mat> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
      throw SolverError("bound state: tridiagonal eigensolver failed");
    return es.eigenvalues()(0);
  };

  BoundState bs;
  bs.lambda_minus = lowest(-1.0);
  bs.lambda_plus = lowest(+1.0);
  bs.lambda = std::min(bs.lambda_minus, bs.lambda_plus);
  bs.negative = bs.lambda < 0.0;
  return bs;
}

}  // namespace sd::fiber
