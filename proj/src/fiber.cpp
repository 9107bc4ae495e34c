#include "stripdirac/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "stripdirac/quadrature.hpp"

namespace sd::fiber {

void FiberSpec::validate() const {
  if (h <= 0.0) throw ConfigError("fiber: h must be positive");
  if (delta <= 0.0) throw ConfigError("fiber: delta must be positive");
  if (n < 16) throw ConfigError("fiber: basis size must be at least 16");
  if (disc == Discretization::kSpectralGalerkin && nq < 2 * n)
    throw ConfigError("fiber: need nq >= 2n quadrature nodes");
}

namespace {

// Legendre values and derivatives, columns j = 0..n-1, at points x in
// [-1, 1]; dscale converts d/dx to the physical derivative.
void legendre_table(const Vec& x, int n, double dscale, Mat& V, Mat& D) {
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
  D *= dscale;
}

}  // namespace

PencilForms forms_legendre(double xi, double h, double delta, int n, int nq,
                           int sign) {
  if (sign != 1 && sign != -1)
    throw ConfigError("fiber forms: sign must be +1 or -1");
  Quadrature q = gauss_legendre(nq, -delta, delta);
  Vec x = q.x / delta;
  Mat V, D;
  legendre_table(x, n, 1.0 / delta, V, D);
  Vec xe(2);
  xe << 1.0, -1.0;
  Mat Vb, Db;
  legendre_table(xe, n, 1.0 / delta, Vb, Db);

  Mat E = sign * h * D +
          (q.x.array() + xi).matrix().asDiagonal() * V;
  Mat Wq = q.w.asDiagonal();
  PencilForms f;
  f.K = E.transpose() * Wq * E;
  f.M = V.transpose() * Wq * V;
  f.B = Vb.row(0).transpose() * Vb.row(0) + Vb.row(1).transpose() * Vb.row(1);
  f.h = h;
  f.identity_mass = false;
  return f;
}

bool gauge_ok(double xi, double h, double delta, double cap) {
  double c = (std::abs(xi) < delta) ? 0.0
                                    : (std::abs(xi) - delta) * (std::abs(xi) - delta);
  double top = (std::abs(xi) + delta) * (std::abs(xi) + delta);
  return (top - c) / h <= cap;
}

namespace {

// Polynomial basis orthonormal against the Gaussian gauge weight on
// (-delta, delta), built by a discrete Stieltjes three-term recurrence with
// one reorthogonalization pass.  Values/derivatives are carried both on the
// quadrature nodes and at the endpoints.
struct GaugedBasis {
  Vec t;        // quadrature nodes
  Vec om;       // weight * gauge factor at nodes
  Mat P, Pd;    // nq x n basis values / derivatives at nodes
  Mat Pb, Pdb;  // 2 x n values / derivatives at t = +delta, -delta
  Vec wb;       // gauge factor at the endpoints
  double h = 0.0, xi = 0.0, delta = 0.0, shift = 0.0;
};

GaugedBasis gauged_basis(double xi, double h, double delta, int n, int nq) {
  if (!gauge_ok(xi, h, delta))
    throw AssumptionError("fiber: gauge weight out of double range");
  GaugedBasis gb;
  gb.h = h;
  gb.xi = xi;
  gb.delta = delta;
  Quadrature q = gauss_legendre(nq, -delta, delta);
  gb.t = q.x;
  double c = (std::abs(xi) < delta)
                 ? 0.0
                 : (std::abs(xi) - delta) * (std::abs(xi) - delta);
  gb.shift = c;
  gb.om = Vec(nq);
  for (int i = 0; i < nq; ++i) {
    double u = xi + gb.t[i];
    gb.om[i] = q.w[i] * std::exp(-(u * u - c) / h);
  }
  gb.wb = Vec(2);
  double up = xi + delta, um = xi - delta;
  gb.wb[0] = std::exp(-(up * up - c) / h);
  gb.wb[1] = std::exp(-(um * um - c) / h);

  gb.P = Mat::Zero(nq, n);
  gb.Pd = Mat::Zero(nq, n);
  gb.Pb = Mat::Zero(2, n);
  gb.Pdb = Mat::Zero(2, n);
  Vec tp(2);
  tp << delta, -delta;

  double s0 = std::sqrt(gb.om.sum());
  gb.P.col(0).setConstant(1.0 / s0);
  gb.Pb.col(0).setConstant(1.0 / s0);

  Vec beta = Vec::Zero(n);
  for (int j = 0; j + 1 < n; ++j) {
    double alpha = gb.om.dot(gb.t.cwiseProduct(gb.P.col(j).cwiseAbs2()));
    Vec qv = (gb.t.array() - alpha).matrix().cwiseProduct(gb.P.col(j));
    Vec qd = (gb.t.array() - alpha).matrix().cwiseProduct(gb.Pd.col(j)) +
             gb.P.col(j);
    Vec qb = (tp.array() - alpha).matrix().cwiseProduct(gb.Pb.col(j));
    Vec qdb = (tp.array() - alpha).matrix().cwiseProduct(gb.Pdb.col(j)) +
              gb.Pb.col(j);
    if (j > 0) {
      qv -= beta[j] * gb.P.col(j - 1);
      qd -= beta[j] * gb.Pd.col(j - 1);
      qb -= beta[j] * gb.Pb.col(j - 1);
      qdb -= beta[j] * gb.Pdb.col(j - 1);
    }
    // One full reorthogonalization sweep keeps the basis orthonormal to
    // machine precision despite the huge dynamic range of the weight.
    Vec proj = gb.P.leftCols(j + 1).transpose() * gb.om.cwiseProduct(qv);
    qv -= gb.P.leftCols(j + 1) * proj;
    qd -= gb.Pd.leftCols(j + 1) * proj;
    qb -= gb.Pb.leftCols(j + 1) * proj;
    qdb -= gb.Pdb.leftCols(j + 1) * proj;

    double b = std::sqrt(gb.om.dot(qv.cwiseAbs2()));
    if (!(b > 0.0) || !std::isfinite(b))
      throw SolverError("fiber: Stieltjes recurrence broke down");
    beta[j + 1] = b;
    gb.P.col(j + 1) = qv / b;
    gb.Pd.col(j + 1) = qd / b;
    gb.Pb.col(j + 1) = qb / b;
    gb.Pdb.col(j + 1) = qdb / b;
  }
  return gb;
}

PencilForms forms_from_gauged(const GaugedBasis& gb) {
  int n = static_cast<int>(gb.P.cols());
  PencilForms f;
  // In the gauge, (h d/dt + xi + t) psi = h * e^{-w/2} g', so the
  // stiffness is h^2 * int om g'^2 and every term is nonnegative.
  f.K = gb.h * gb.h *
        (gb.Pd.transpose() * gb.om.asDiagonal() * gb.Pd);
  f.B = gb.wb[0] * gb.Pb.row(0).transpose() * gb.Pb.row(0) +
        gb.wb[1] * gb.Pb.row(1).transpose() * gb.Pb.row(1);
  f.M = Mat::Identity(n, n);
  f.h = gb.h;
  f.identity_mass = true;
  return f;
}

}  // namespace

PencilForms forms_gauged_plus(double xi, double h, double delta, int n,
                              int nq) {
  return forms_from_gauged(gauged_basis(xi, h, delta, n, nq));
}

PencilForms forms_fd(double xi, double h, double delta, int n, int sign) {
  if (sign != 1 && sign != -1)
    throw ConfigError("fiber forms: sign must be +1 or -1");
  if (n < 8) throw ConfigError("fiber fd: need at least 8 nodes");
  double le = 2.0 * delta / (n - 1);
  PencilForms f;
  f.K = Mat::Zero(n, n);
  f.M = Mat::Zero(n, n);
  f.B = Mat::Zero(n, n);
  f.h = h;
  f.identity_mass = false;
  Quadrature g3 = gauss_legendre(3, 0.0, 1.0);
  for (int e = 0; e + 1 < n; ++e) {
    double a = -delta + e * le;
    double k11 = 0, k12 = 0, k22 = 0, m11 = 0, m12 = 0, m22 = 0;
    for (int gq = 0; gq < 3; ++gq) {
      double u = g3.x[gq], wq = g3.w[gq] * le;
      double t = a + u * le;
      double n1 = 1.0 - u, n2 = u;
      double e1 = sign * h * (-1.0 / le) + (xi + t) * n1;
      double e2 = sign * h * (1.0 / le) + (xi + t) * n2;
      k11 += wq * e1 * e1;
      k12 += wq * e1 * e2;
      k22 += wq * e2 * e2;
      m11 += wq * n1 * n1;
      m12 += wq * n1 * n2;
      m22 += wq * n2 * n2;
    }
    f.K(e, e) += k11;
    f.K(e, e + 1) += k12;
    f.K(e + 1, e) += k12;
    f.K(e + 1, e + 1) += k22;
    f.M(e, e) += m11;
    f.M(e, e + 1) += m12;
    f.M(e + 1, e) += m12;
    f.M(e + 1, e + 1) += m22;
  }
  f.B(0, 0) = 1.0;
  f.B(n - 1, n - 1) = 1.0;
  return f;
}

namespace {

struct RayPoint {
  double kq = 0, bq = 0, mq = 0;
  Vec g;
};

// Lowest eigenpair of (K + lam h B, M) and its three quadratic forms.
RayPoint ray_lowest(const PencilForms& f, double lam) {
  Mat A = f.K + (lam * f.h) * f.B;
  RayPoint r;
  if (f.identity_mass) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    if (es.info() != Eigen::Success)
      throw SolverError("fiber: eigensolver failed in ray_lowest");
    r.g = es.eigenvectors().col(0);
  } else {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, f.M);
    if (es.info() != Eigen::Success)
      throw SolverError("fiber: eigensolver failed in ray_lowest");
    r.g = es.eigenvectors().col(0);
  }
  r.kq = r.g.dot(f.K * r.g);
  r.bq = r.g.dot(f.B * r.g);
  r.mq = r.g.dot(f.M * r.g);
  return r;
}

// K is a Gram matrix in every construction, so its quadratic form is
// nonnegative up to rounding; clamp tiny negative round-off (it would
// otherwise flip the bisection sign at very small lambda).
double clamp_gram(const PencilForms& f, const RayPoint& r) {
  double ktol = 1e-10 * (1.0 + f.K.cwiseAbs().maxCoeff()) * r.g.squaredNorm();
  if (r.kq < -ktol)
    throw SolverError("fiber: stiffness form indefinite beyond rounding");
  return std::max(r.kq, 0.0);
}

// Sign function for the certified bisection: positive below the ground
// root, negative above (concavity of the ground branch).
double root_indicator(const PencilForms& f, double lam) {
  RayPoint r = ray_lowest(f, lam);
  return (clamp_gram(f, r) + lam * f.h * r.bq) / r.mq - lam * lam;
}

}  // namespace

double ell1(const PencilForms& f, double lambda) {
  Mat A = f.K + (lambda * f.h) * f.B - (lambda * lambda) * f.M;
  if (f.identity_mass) {
    Eigen::SelfAdjointEigenSolver<Mat> es(A);
    if (es.info() != Eigen::Success)
      throw SolverError("fiber: eigensolver failed in ell1");
    return es.eigenvalues()(0);
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(A, f.M);
  if (es.info() != Eigen::Success)
    throw SolverError("fiber: eigensolver failed in ell1");
  return es.eigenvalues()(0);
}

double ell1(double xi, double h, double delta, double lambda, int sign,
            int n, int nq) {
  PencilForms f = (sign > 0 && gauge_ok(xi, h, delta))
                      ? forms_gauged_plus(xi, h, delta, n, nq)
                      : forms_legendre(xi, h, delta, n, nq, sign);
  return ell1(f, lambda);
}

double mu1_via_root(const PencilForms& f, double bracket_hi) {
  double hi = bracket_hi;
  double lo = hi * 1e-22;
  int guard = 0;
  while (root_indicator(f, lo) <= 0.0) {
    lo *= 1e-2;
    if (++guard > 150 || lo < 1e-305)
      throw SolverError("fiber: lower bracket exhaustion in mu1_via_root");
  }
  guard = 0;
  while (root_indicator(f, hi) >= 0.0) {
    hi *= 10.0;
    if (++guard > 20)
      throw SolverError("fiber: upper bracket exhaustion in mu1_via_root");
  }
  for (int it = 0; it < 90; ++it) {
    double mid = std::sqrt(lo * hi);
    if (root_indicator(f, mid) > 0.0)
      lo = mid;
    else
      hi = mid;
    if (hi / lo - 1.0 < 5e-15) break;
  }
  double lam = std::sqrt(lo * hi);
  // Fixed-point polish: at the root, lam solves the scalar quadratic built
  // from the minimizer's form values.
  for (int it = 0; it < 5; ++it) {
    RayPoint r = ray_lowest(f, lam);
    double bqh = f.h * r.bq;
    double kq = clamp_gram(f, r);
    lam = (bqh + std::sqrt(bqh * bqh + 4.0 * r.mq * kq)) / (2.0 * r.mq);
  }
  return lam;
}

double mu1_via_root(double xi, double h, double delta, int sign, int n,
                    int nq) {
  if (sign > 0) {
    double hi = nu1(xi, h, delta) + 1.0;
    PencilForms f = gauge_ok(xi, h, delta)
                        ? forms_gauged_plus(xi, h, delta, n, nq)
                        : forms_legendre(xi, h, delta, n, nq, +1);
    return mu1_via_root(f, hi);
  }
  PencilForms f = forms_legendre(xi, h, delta, n, nq, -1);
  return mu1_via_root(f, 2.0 * std::sqrt(h) + std::abs(xi) + delta);
}

double mu1_via_rho(const PencilForms& f, int restarts, unsigned seed,
                   Vec* min_vec) {
  const int n = static_cast<int>(f.K.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  auto rho = [&](const Vec& g) {
    double kq = g.dot(f.K * g);
    double bq = f.h * g.dot(f.B * g);
    double mq = g.dot(f.M * g);
    return (bq + std::sqrt(bq * bq + 4.0 * mq * kq)) / (2.0 * mq);
  };
  auto grad = [&](const Vec& g, double& r_out) -> Vec {
    double kq = g.dot(f.K * g);
    double bq = f.h * g.dot(f.B * g);
    double mq = g.dot(f.M * g);
    double r = (bq + std::sqrt(bq * bq + 4.0 * mq * kq)) / (2.0 * mq);
    r_out = r;
    return (2.0 * (f.K * g) + 2.0 * r * f.h * (f.B * g) -
            2.0 * r * r * (f.M * g)) /
           (2.0 * mq * r - bq);
  };

  double best = std::numeric_limits<double>::infinity();
  Vec best_g = Vec::Zero(n);
  for (int s = 0; s <= restarts; ++s) {
    Vec g(n);
    if (s == 0) {
      g.setZero();
      g[0] = 1.0;
    } else {
      for (int i = 0; i < n; ++i) g[i] = gauss(rng);
    }
    g /= std::sqrt(g.dot(f.M * g));
    double r = rho(g);
    for (int it = 0; it < 80; ++it) {
      Vec dr = grad(g, r);
      Mat P = f.K + std::max(r * r, 1e-280) * f.M;
      Eigen::LLT<Mat> llt(P);
      Vec dvec = (llt.info() == Eigen::Success) ? Vec(-llt.solve(dr))
                                                : Vec(-dr);
      double tau = 1.0, r1 = r;
      Vec g1;
      bool ok = false;
      for (int bt = 0; bt < 60; ++bt) {
        g1 = g + tau * dvec;
        r1 = rho(g1);
        if (r1 < r) {
          ok = true;
          break;
        }
        tau *= 0.5;
      }
      if (!ok) break;
      g = g1 / std::sqrt(g1.dot(f.M * g1));
      if (r - r1 <= 1e-16 * r) {
        r = r1;
        break;
      }
      r = r1;
    }
    double rf = rho(g);
    if (rf < best) {
      best = rf;
      best_g = g;
    }
  }
  if (!std::isfinite(best))
    throw SolverError("fiber: rho descent failed to converge");
  if (min_vec != nullptr)
    *min_vec = best_g / std::sqrt(best_g.dot(f.M * best_g));
  return best;
}

double mu1_via_rho(double xi, double h, double delta, int sign, int n, int nq,
                   int restarts, unsigned seed, Vec* min_vec) {
  PencilForms f = (sign > 0 && gauge_ok(xi, h, delta))
                      ? forms_gauged_plus(xi, h, delta, n, nq)
                      : forms_legendre(xi, h, delta, n, nq, sign);
  return mu1_via_rho(f, restarts, seed, min_vec);
}

namespace {

// Rayleigh-quotient iteration on the symmetric companion linearization;
// refines one root of the quadratic pencil independently of the scalar
// root-finder.  Returns the input value if the iteration wanders off.
double rqi_polish(const Mat& A1, const Mat& B1, double lam0, const Vec& v0) {
  double lam = lam0;
  Vec v = v0;
  double nv = v.norm();
  if (!(nv > 0.0)) return lam0;
  v /= nv;
  int dim = static_cast<int>(A1.rows());
  for (int it = 0; it < 8; ++it) {
    Mat S = A1 - lam * B1;
    Eigen::PartialPivLU<Mat> lu(S);
    Vec y = lu.solve(B1 * v);
    double ny = y.norm();
    if (!std::isfinite(ny) || ny == 0.0) break;
    v = y / ny;
    double num = v.dot(A1 * v), den = v.dot(B1 * v);
    if (std::abs(den) < 1e-14 * static_cast<double>(dim)) break;
    double next = num / den;
    if (!std::isfinite(next)) break;
    double move = std::abs(next - lam);
    lam = next;
    if (move <= 1e-15 * (1.0 + std::abs(lam))) break;
  }
  // Accept only a genuine refinement of the same root.
  if (std::abs(lam - lam0) > 1e-3 * (std::abs(lam0) + 1e-300) ||
      lam * lam0 <= 0.0)
    return lam0;
  return lam;
}

struct CompanionEigs {
  std::vector<double> pos, neg;  // neg stored positive
};

// All pencil roots via the companion linearization
// A1 = [[K, 0], [0, M]],  B1 = [[-hB, M], [M, 0]],  A1 z = lam B1 z.
CompanionEigs companion_eigs(const PencilForms& f, int polish_count) {
  const int n = static_cast<int>(f.K.rows());
  Mat A1 = Mat::Zero(2 * n, 2 * n), B1 = Mat::Zero(2 * n, 2 * n);
  A1.topLeftCorner(n, n) = f.K;
  A1.bottomRightCorner(n, n) = f.M;
  B1.topLeftCorner(n, n) = -f.h * f.B;
  B1.topRightCorner(n, n) = f.M;
  B1.bottomLeftCorner(n, n) = f.M;

  Eigen::GeneralizedEigenSolver<Mat> ges;
  ges.compute(A1, B1, true);
  if (ges.info() != Eigen::Success)
    throw SolverError("fiber: QZ failed on the companion pencil");

  struct Root {
    double lam;
    int col;
  };
  std::vector<Root> roots;
  for (int k = 0; k < 2 * n; ++k) {
    cplx al = ges.alphas()(k);
    double be = ges.betas()(k);
    if (std::abs(be) <= 1e-13 * (1.0 + std::abs(al))) continue;
    cplx lam = al / be;
    if (std::abs(lam.imag()) > 1e-10 * (1.0 + std::abs(lam.real()))) continue;
    roots.push_back({lam.real(), k});
  }
  if (roots.size() < 2)
    throw SolverError("fiber: too few real pencil roots from QZ");

  // Eliminating one spinor component multiplies the eigenvalue equation by
  // lambda, so the quadratic pencil carries exactly one artificial root at
  // lambda = 0 (K annihilates the gauge Gaussian).  It must be removed, and
  // it must be clearly separated from the genuine spectrum for this route
  // to be trustworthy.
  std::size_t iz = 0;
  for (std::size_t k = 1; k < roots.size(); ++k)
    if (std::abs(roots[k].lam) < std::abs(roots[iz].lam)) iz = k;
  double next_mag = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < roots.size(); ++k)
    if (k != iz) next_mag = std::min(next_mag, std::abs(roots[k].lam));
  // (The artifact sits at exactly 0 for the spectral bases and at
  // O(mesh^2) for the FD variant; 5% of the nearest genuine root is a
  // conservative identifiability margin.)
  if (!(std::abs(roots[iz].lam) <= 0.05 * next_mag))
    throw SolverError(
        "fiber: elimination zero mode not separated from the spectrum");
  roots.erase(roots.begin() + iz);

  std::sort(roots.begin(), roots.end(),
            [](const Root& a, const Root& b) { return a.lam < b.lam; });

  CompanionEigs out;
  auto polish = [&](const Root& r) {
    Vec v = ges.eigenvectors().col(r.col).real();
    if (v.norm() < 1e-300) v = ges.eigenvectors().col(r.col).imag();
    return rqi_polish(A1, B1, r.lam, v);
  };
  int polished_pos = 0, polished_neg = 0;
  for (const Root& r : roots) {
    if (r.lam > 0.0) {
      double lam = (polished_pos < polish_count) ? polish(r) : r.lam;
      if (r.lam > 0.0 && polished_pos < polish_count) ++polished_pos;
      out.pos.push_back(lam);
    }
  }
  for (auto it = roots.rbegin(); it != roots.rend(); ++it) {
    if (it->lam < 0.0) {
      double lam = (polished_neg < polish_count) ? polish(*it) : it->lam;
      if (polished_neg < polish_count) ++polished_neg;
      out.neg.push_back(-lam);
    }
  }
  std::sort(out.pos.begin(), out.pos.end());
  std::sort(out.neg.begin(), out.neg.end());
  return out;
}

}  // namespace

std::pair<Vec, Vec> dirac_fiber_eigs(const FiberSpec& spec, int count) {
  spec.validate();
  if (count < 1) throw ConfigError("fiber: count must be >= 1");

  PencilForms plus, minus;
  if (spec.disc == Discretization::kSecondOrderFD) {
    plus = forms_fd(spec.xi, spec.h, spec.delta, spec.n, +1);
    minus = forms_fd(spec.xi, spec.h, spec.delta, spec.n, -1);
  } else {
    plus = gauge_ok(spec.xi, spec.h, spec.delta)
               ? forms_gauged_plus(spec.xi, spec.h, spec.delta, spec.n,
                                   spec.nq)
               : forms_legendre(spec.xi, spec.h, spec.delta, spec.n, spec.nq,
                                +1);
    minus = forms_legendre(spec.xi, spec.h, spec.delta, spec.n, spec.nq, -1);
  }
  CompanionEigs ep = companion_eigs(plus, 3);
  CompanionEigs em = companion_eigs(minus, 3);
  if (static_cast<int>(ep.pos.size()) < count ||
      static_cast<int>(em.pos.size()) < count)
    throw SolverError("fiber: fewer converged eigenvalues than requested");
  Vec pos(count), neg(count);
  for (int k = 0; k < count; ++k) {
    pos[k] = ep.pos[k];
    neg[k] = em.pos[k];  // positive roots of the minus pencil
  }
  return {pos, neg};
}

namespace {

// Scaled complementary error function erfcx(z) = exp(z^2) erfc(z) for
// z >= 0.  Below z = 25 the direct product is exact and overflow-free
// (z^2 <= 625 < 709); beyond that the asymptotic series is converged to
// machine precision.
double erfcx_pos(double z) {
  if (z < 25.0) return std::exp(z * z) * std::erfc(z);
  double z2 = z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 10; ++k) {
    term *= -(2.0 * k - 1.0) / (2.0 * z2);
    sum += term;
  }
  return sum / (z * std::sqrt(kPi));
}

}  // namespace

double nu1(double xi, double h, double delta) {
  if (h <= 0.0 || delta <= 0.0) throw ConfigError("nu1: h, delta > 0 required");
  double x = std::abs(xi);
  double rh = std::sqrt(h);
  double x1 = (x - delta) / rh, x2 = (x + delta) / rh;
  if (x1 <= 0.0) {
    // The erf values have opposite signs (or x1 = 0): no cancellation.
    double num = h * (std::exp(-x1 * x1) + std::exp(-x2 * x2));
    double den = 0.5 * std::sqrt(kPi * h) * (std::erf(x2) - std::erf(x1));
    return num / den;
  }
  // Outside the strip shadow the erf difference cancels catastrophically;
  // factor exp(-x1^2) out of numerator and denominator analytically.  The
  // remaining ratio qfac = exp(x1^2 - x2^2) lives in [0, 1].
  double qfac = std::exp(-4.0 * x * delta / h);
  double num = h * (1.0 + qfac);
  double den = 0.5 * std::sqrt(kPi * h) *
               (erfcx_pos(x1) - erfcx_pos(x2) * qfac);
  return num / den;
}

DispersionCurve dispersion_sweep(double h, double delta, int branches,
                                 int nxi, double window, int n, int nq) {
  if (branches < 1 || branches > n / 2)
    throw ConfigError("dispersion: branches must be in [1, n/2]");
  if (nxi < 3) throw ConfigError("dispersion: need at least 3 xi points");
  double W = window > 0.0 ? window : delta + 2.0 * std::sqrt(h) + 2.0;
  DispersionCurve dc;
  dc.h = h;
  dc.delta = delta;
  dc.xi = Vec::LinSpaced(nxi, -W, W);
  dc.pos = Mat::Zero(nxi, branches);
  dc.neg = Mat::Zero(nxi, branches);

  std::vector<std::string> errors(nxi);
  parallel_for(nxi, [&](int i) {
    try {
      FiberSpec spec;
      spec.h = h;
      spec.delta = delta;
      spec.xi = dc.xi[i];
      spec.n = n;
      spec.nq = nq;
      auto [pos, neg] = dirac_fiber_eigs(spec, branches);
      dc.pos.row(i) = pos.transpose();
      dc.neg.row(i) = neg.transpose();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (int i = 0; i < nxi; ++i)
    if (!errors[i].empty())
      throw SolverError("dispersion: fiber solve failed at xi = " +
                        std::to_string(dc.xi[i]) + ": " + errors[i]);
  return dc;
}

namespace {

// Golden-section minimization after the caller brackets the minimum.
std::pair<double, double> golden_min(const std::function<double(double)>& f,
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

Threshold minimize_mu1(double h, double delta, int sign, int n, int nq) {
  double W = delta + 2.0 * std::sqrt(h) + 2.0;
  auto f = [&](double xi) { return mu1_via_root(xi, h, delta, sign, n, nq); };
  const int nscan = 33;
  double best_x = 0.0, best_v = std::numeric_limits<double>::infinity();
  int best_i = 0;
  for (int i = 0; i < nscan; ++i) {
    double xi = W * i / (nscan - 1);
    double v = f(xi);
    if (v < best_v) {
      best_v = v;
      best_x = xi;
      best_i = i;
    }
  }
  double a = W * std::max(best_i - 1, 0) / (nscan - 1);
  double b = W * std::min(best_i + 1, nscan - 1) / (nscan - 1);
  auto [xm, vm] = golden_min(f, a, b, 80, 1e-11);
  Threshold th;
  if (vm < best_v) {
    th.lambda_ess = vm;
    th.xi_star = xm;
  } else {
    th.lambda_ess = best_v;
    th.xi_star = best_x;
  }
  return th;
}

}  // namespace

Threshold threshold_pos(double h, double delta, int n, int nq) {
  return minimize_mu1(h, delta, +1, n, nq);
}

Threshold threshold_neg(double h, double delta, int n, int nq) {
  return minimize_mu1(h, delta, -1, n, nq);
}

ProjectorResidual kernel_projector_residual(double xi, double h, double delta,
                                            int n, int nq) {
  if (delta * delta / h > 700.0)
    throw AssumptionError(
        "projector residual: exp(delta^2/h) exceeds double range");
  GaugedBasis gb = gauged_basis(xi, h, delta, n, nq);
  PencilForms f = forms_from_gauged(gb);

  ProjectorResidual pr;
  pr.mu1 = mu1_via_root(f, nu1(xi, h, delta) + 1.0);
  pr.gate = 2.0 * std::sqrt(h) * std::exp(-delta * delta / h);
  pr.in_window = pr.mu1 <= pr.gate;
  if (!pr.in_window)
    throw AssumptionError(
        "projector residual: xi outside the exponential window");

  Vec g;
  mu1_via_rho(f, 5, 0, &g);

  // Coefficients of the pure Gaussian (g = const) in the orthonormal basis.
  Vec ones = Vec::Ones(gb.t.size());
  Vec cg = gb.P.transpose() * gb.om.cwiseProduct(ones);
  cg /= cg.norm();
  Vec res = g - g.dot(cg) * cg;

  Vec gv = gb.P * res;
  Vec gdv = gb.Pd * res;
  double l2 = gb.om.dot(gv.cwiseAbs2());
  // psi' = e^{-w/2} (g' - ((xi+t)/h) g)
  Vec dv = gdv - ((gb.t.array() + xi) / h).matrix().cwiseProduct(gv);
  double h1sq = l2 + gb.om.dot(dv.cwiseAbs2());
  pr.h1 = std::sqrt(h1sq);
  pr.scaled = pr.h1 * std::pow(h, 1.5) * std::exp(delta * delta / h);
  return pr;
}

}  // namespace sd::fiber
