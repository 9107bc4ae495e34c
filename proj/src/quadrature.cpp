#include "stripdirac/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace sd {

Quadrature gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: n must be >= 1");
  // Jacobi matrix of the Legendre recurrence; eigenvalues are the nodes,
  // weights come from the first eigenvector components (Golub-Welsch).
  Mat J = Mat::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(J);
  if (es.info() != Eigen::Success)
    throw SolverError("gauss_legendre: eigensolver failed");
  Quadrature q;
  q.x = es.eigenvalues();
  q.w = Vec(n);
  for (int i = 0; i < n; ++i) {
    double v = es.eigenvectors()(0, i);
    q.w[i] = 2.0 * v * v;
  }
  return q;
}

Quadrature gauss_legendre(int n, double a, double b) {
  Quadrature q = gauss_legendre(n);
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    q.x[i] = mid + half * q.x[i];
    q.w[i] *= half;
  }
  return q;
}

Quadrature composite_gauss(const std::vector<double>& edges, int nn) {
  if (edges.size() < 2) throw ConfigError("composite_gauss: need >= 2 edges");
  Quadrature ref = gauss_legendre(nn);
  int np = static_cast<int>(edges.size()) - 1;
  Quadrature q;
  q.x = Vec(np * nn);
  q.w = Vec(np * nn);
  for (int p = 0; p < np; ++p) {
    double a = edges[p], b = edges[p + 1];
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < nn; ++i) {
      q.x[p * nn + i] = mid + half * ref.x[i];
      q.w[p * nn + i] = half * ref.w[i];
    }
  }
  return q;
}

std::vector<double> graded_edges(double lo, double hi, double c,
                                 double fine_hw, double fine_step,
                                 double coarse_step) {
  if (!(hi > lo)) throw ConfigError("graded_edges: need hi > lo");
  double fa = std::max(lo, c - fine_hw);
  double fb = std::min(hi, c + fine_hw);
  std::vector<double> e;
  e.push_back(lo);
  auto fill = [&e](double a, double b, double step) {
    if (b <= a) return;
    int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
    for (int i = 1; i <= n; ++i) e.push_back(a + (b - a) * i / n);
  };
  if (fb > fa) {
    fill(lo, fa, coarse_step);
    fill(fa, fb, fine_step);
    fill(fb, hi, coarse_step);
  } else {
    fill(lo, hi, coarse_step);
  }
  // Deduplicate (fa may equal lo etc.).
  std::vector<double> out;
  for (double v : e)
    if (out.empty() || v > out.back() + 1e-15 * (hi - lo)) out.push_back(v);
  out.back() = hi;
  return out;
}

std::vector<double> uniform_edges(double lo, double hi, int n) {
  std::vector<double> e(n + 1);
  for (int i = 0; i <= n; ++i) e[i] = lo + (hi - lo) * i / n;
  return e;
}

Vec simpson_weights(int n, double dx) {
  if (n < 3 || n % 2 == 0)
    throw ConfigError("simpson_weights: n must be odd and >= 3");
  Vec w = Vec::Zero(n);
  for (int i = 0; i + 2 < n; i += 2) {
    w[i] += dx / 3.0;
    w[i + 1] += 4.0 * dx / 3.0;
    w[i + 2] += dx / 3.0;
  }
  return w;
}

}  // namespace sd
