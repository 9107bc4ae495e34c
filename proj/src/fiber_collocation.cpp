// Chebyshev collocation of the raw 2x2 first-order fiber system.  This is
// the cross-check discretization: first-order collocation is prone to
// spurious modes, so every candidate eigenpair is re-validated by the
// strong residual of its polynomial eigenfunction on a refined grid.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "stripdirac/fiber.hpp"

namespace sd::fiber {

namespace {

// Chebyshev-Lobatto points x_j = cos(j pi / N) and differentiation matrix.
void cheb(int N, Vec& x, Mat& D) {
  x.resize(N + 1);
  for (int j = 0; j <= N; ++j) x[j] = std::cos(kPi * j / N);
  D = Mat::Zero(N + 1, N + 1);
  auto c = [&](int i) { return (i == 0 || i == N) ? 2.0 : 1.0; };
  for (int i = 0; i <= N; ++i) {
    double row = 0.0;
    for (int j = 0; j <= N; ++j) {
      if (i == j) continue;
      double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      D(i, j) = (c(i) / c(j)) * sgn / (x[i] - x[j]);
      row += D(i, j);
    }
    D(i, i) = -row;
  }
}

// Clenshaw-Curtis weights on [-1, 1] for the N+1 Lobatto points.
Vec clencurt(int N) {
  Vec w = Vec::Zero(N + 1);
  if (N % 2 == 0) {
    w[0] = w[N] = 1.0 / (N * N - 1.0);
    for (int i = 1; i < N; ++i) {
      double th = kPi * i / N;
      double v = 1.0;
      for (int k = 1; k <= N / 2 - 1; ++k)
        v -= 2.0 * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
      v -= std::cos(N * th) / (N * N - 1.0);
      w[i] = 2.0 * v / N;
    }
  } else {
    w[0] = w[N] = 1.0 / (N * N);
    for (int i = 1; i < N; ++i) {
      double th = kPi * i / N;
      double v = 1.0;
      for (int k = 1; k <= (N - 1) / 2; ++k)
        v -= 2.0 * std::cos(2.0 * k * th) / (4.0 * k * k - 1.0);
      w[i] = 2.0 * v / N;
    }
  }
  return w;
}

// Barycentric interpolation from the Lobatto grid to arbitrary points.
Vec bary_interp(const Vec& xs, const Vec& fs, const Vec& xq) {
  int N = static_cast<int>(xs.size()) - 1;
  Vec lam(N + 1);
  for (int j = 0; j <= N; ++j) {
    lam[j] = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == N) lam[j] *= 0.5;
  }
  Vec out(xq.size());
  for (int q = 0; q < xq.size(); ++q) {
    double num = 0.0, den = 0.0;
    bool hit = false;
    for (int j = 0; j <= N; ++j) {
      double d = xq[q] - xs[j];
      if (std::abs(d) < 1e-14) {
        out[q] = fs[j];
        hit = true;
        break;
      }
      double t = lam[j] / d;
      num += t * fs[j];
      den += t;
    }
    if (!hit) out[q] = num / den;
  }
  return out;
}

}  // namespace

std::pair<Vec, Vec> dirac_eigs_collocation(const FiberSpec& spec, int count,
                                           int ncheb, double res_tol) {
  spec.validate();
  const int N = ncheb;
  const double delta = spec.delta, h = spec.h, xi = spec.xi;
  Vec x;
  Mat Dm;
  cheb(N, x, Dm);
  Vec t = delta * x;
  Mat D = Dm / delta;
  const int n1 = N + 1;

  Mat A = Mat::Zero(2 * n1, 2 * n1), B = Mat::Zero(2 * n1, 2 * n1);
  for (int i = 0; i < n1; ++i) {
    // (xi + t) psi2 - h psi2' = mu psi1
    for (int j = 0; j < n1; ++j) A(i, n1 + j) = -h * D(i, j);
    A(i, n1 + i) += xi + t[i];
    B(i, i) = 1.0;
    // (xi + t) psi1 + h psi1' = mu psi2
    for (int j = 0; j < n1; ++j) A(n1 + i, j) = h * D(i, j);
    A(n1 + i, i) += xi + t[i];
    B(n1 + i, n1 + i) = 1.0;
  }
  // Boundary rows replace the first equation at the endpoints:
  // psi1(+delta) = -psi2(+delta), psi1(-delta) = +psi2(-delta).
  A.row(0).setZero();
  B.row(0).setZero();
  A(0, 0) = 1.0;
  A(0, n1) = 1.0;
  A.row(N).setZero();
  B.row(N).setZero();
  A(N, N) = 1.0;
  A(N, n1 + N) = -1.0;

  Eigen::GeneralizedEigenSolver<Mat> ges;
  ges.compute(A, B, true);
  if (ges.info() != Eigen::Success)
    throw SolverError("collocation: QZ failed");

  // Refined grid for the strong residual of each candidate eigenfunction.
  const int Nf = 2 * N;
  Vec xf;
  Mat Dmf;
  cheb(Nf, xf, Dmf);
  Vec tf = delta * xf;
  Mat Df = Dmf / delta;
  Vec wcc = delta * clencurt(Nf);

  std::vector<double> pos, neg;
  for (int k = 0; k < 2 * n1; ++k) {
    double be = ges.betas()(k);
    cplx al = ges.alphas()(k);
    if (std::abs(be) <= 1e-12 * (1.0 + std::abs(al))) continue;
    cplx lamc = al / be;
    if (std::abs(lamc.imag()) > 1e-8 * (1.0 + std::abs(lamc.real())))
      continue;
    double mu = lamc.real();
    if (std::abs(mu) > 1e4) continue;

    Vec v = ges.eigenvectors().col(k).real();
    if (v.norm() < 1e-300) v = ges.eigenvectors().col(k).imag();
    Vec p1 = v.head(n1), p2 = v.tail(n1);
    Vec p1f = bary_interp(x, p1, xf), p2f = bary_interp(x, p2, xf);
    Vec r1 = (tf.array() + xi).matrix().cwiseProduct(p2f) - h * (Df * p2f) -
             mu * p1f;
    Vec r2 = (tf.array() + xi).matrix().cwiseProduct(p1f) + h * (Df * p1f) -
             mu * p2f;
    double rn = 0.0, fn = 0.0;
    for (int i = 0; i <= Nf; ++i) {
      rn += wcc[i] * (r1[i] * r1[i] + r2[i] * r2[i]);
      fn += wcc[i] * (p1f[i] * p1f[i] + p2f[i] * p2f[i]);
    }
    if (!(fn > 0.0)) continue;
    if (std::sqrt(rn / fn) > res_tol) continue;
    if (mu > 0.0)
      pos.push_back(mu);
    else
      neg.push_back(-mu);
  }
  std::sort(pos.begin(), pos.end());
  std::sort(neg.begin(), neg.end());
  if (static_cast<int>(pos.size()) < count ||
      static_cast<int>(neg.size()) < count)
    throw SolverError(
        "collocation: fewer than the requested eigenvalues survive the "
        "residual filter");
  Vec vp(count), vn(count);
  for (int k = 0; k < count; ++k) {
    vp[k] = pos[k];
    vn[k] = neg[k];
  }
  return {vp, vn};
}

}  // namespace sd::fiber
