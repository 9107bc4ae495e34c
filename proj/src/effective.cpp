#include "stripdirac/effective.hpp"

#include <algorithm>
#include <cmath>

#include "stripdirac/quadrature.hpp"

namespace sd {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// Row of basis values chi * u^n, n = 0..M-1, at one chain point.
void basis_row(const ChainPoint& p, int M, CVec& row) {
  cplx pw(1.0, 0.0);
  for (int n = 0; n < M; ++n) {
    row[n] = p.chi * pw;
    pw *= p.u;
  }
}

// Lowest kneed eigenvalues of the Hermitian pencil A v = lambda B v with
// B positive definite, after the exact diagonal congruence that gives B a
// unit diagonal (the raw B spans many orders of magnitude).
Vec pencil_lowest(const CMat& A, const CMat& B, int kneed,
                  const char* what) {
  const int M = static_cast<int>(A.rows());
  CVec d(M);
  for (int j = 0; j < M; ++j) {
    double bjj = B(j, j).real();
    if (!(bjj > 0.0)) throw SolverError(std::string(what) +
                                        ": weighted Gram lost positivity");
    d[j] = cplx(1.0 / std::sqrt(bjj), 0.0);
  }
  CMat As = d.asDiagonal() * A * d.asDiagonal();
  CMat Bs = d.asDiagonal() * B * d.asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<CMat> es(
      As, Bs, Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success)
    throw SolverError(std::string(what) + ": pencil solve failed");
  Vec lam = es.eigenvalues().head(kneed);
  if (!(lam[0] > 0.0))
    throw SolverError(std::string(what) +
                      ": pencil produced a nonpositive eigenvalue");
  return lam;
}

}  // namespace

BargmannBasis bargmann_orthogonalize(double a, double b, int M, int nq) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ConfigError("bargmann: Hessian must be positive definite");
  if (M < 1 || M > 24)
    throw ConfigError("bargmann: truncation order out of range");
  if (nq < 4 * M + 16)
    throw ConfigError("bargmann: quadrature under-resolved for this order");

  // Per-axis windows where the Gaussian tail is far below roundoff for
  // the highest moment in play; scaling each axis by its own coefficient
  // keeps the node density per Gaussian width anisotropy-independent.
  const double Rx = std::sqrt(280.0 / a);
  const double Ry = std::sqrt(280.0 / b);
  Quadrature qx = gauss_legendre(nq, -Rx, Rx);
  Quadrature qy = gauss_legendre(nq, -Ry, Ry);

  // Monomial Gram <z^m, z^n>; real by the y2 -> -y2 symmetry.
  Mat H = Mat::Zero(M, M);
  std::vector<cplx> pw(M);
  for (int i = 0; i < nq; ++i) {
    double y1 = qx.x[i];
    double w1 = qx.w[i] * std::exp(-0.5 * a * y1 * y1);
    for (int j = 0; j < nq; ++j) {
      double y2 = qy.x[j];
      double w = w1 * qy.w[j] * std::exp(-0.5 * b * y2 * y2);
      cplx z(y1, y2), zp(1.0, 0.0);
      for (int n = 0; n < M; ++n) {
        pw[n] = zp;
        zp *= z;
      }
      for (int m = 0; m < M; ++m)
        for (int n = 0; n <= m; ++n)
          H(m, n) += w * (pw[m] * std::conj(pw[n])).real();
    }
  }
  H = Mat(H.selfadjointView<Eigen::Lower>());

  BargmannBasis out;
  out.a = a;
  out.b = b;
  out.coeff = Mat::Identity(M, M);
  out.norm = Vec::Zero(M);
  // Modified Gram-Schmidt on coefficient rows with one reorthogonalization
  // pass; monic normalization is preserved.
  for (int m = 0; m < M; ++m) {
    Vec c = out.coeff.row(m).transpose();
    for (int pass = 0; pass < 2; ++pass)
      for (int l = 0; l < m; ++l) {
        Vec cl = out.coeff.row(l).transpose();
        double r = cl.dot(H * c) / (out.norm[l] * out.norm[l]);
        c -= r * cl;
      }
    out.coeff.row(m) = c.transpose();
    double n2 = c.dot(H * c);
    if (!(n2 > 0.0))
      throw SolverError("bargmann: Gram-Schmidt lost positivity");
    out.norm[m] = std::sqrt(n2);
  }
  return out;
}

double bargmann_norm_closed(double a, double b, int m) {
  return std::sqrt(2.0 * kPi * factorial(m) * std::pow(a + b, m) /
                   std::pow(a * b, m + 0.5));
}

Vec bargmann_coeff_closed(double a, double b, int m) {
  Vec c = Vec::Zero(m + 1);
  if (std::abs(b - a) < 1e-14 * (a + b)) {
    c[m] = 1.0;
    return c;
  }
  // Monic probabilists' Hermite recurrence He_{j+1} = x He_j - j He_{j-1},
  // then P_m(z) = He_m(cz) / c^m.
  std::vector<Vec> he(m + 1);
  he[0] = Vec::Zero(m + 1);
  he[0][0] = 1.0;
  if (m >= 1) {
    he[1] = Vec::Zero(m + 1);
    he[1][1] = 1.0;
  }
  for (int j = 1; j < m; ++j) {
    Vec next = Vec::Zero(m + 1);
    next.segment(1, m) = he[j].head(m);
    next -= static_cast<double>(j) * he[j - 1];
    he[j + 1] = next;
  }
  const double cs = std::sqrt(a * b / std::abs(b - a));
  for (int j = 0; j <= m; ++j)
    c[j] = he[m][j] * std::pow(cs, j - m);
  return c;
}

double bargmann_dB(double a, double b, int k) {
  if (k < 1) throw ConfigError("bargmann: k must be >= 1");
  return bargmann_norm_closed(a, b, k - 1) / factorial(k - 1);
}

HardyBasis hardy_basis(const DiskChain& chain, double s_min, double t_min,
                       int M, int kmax, int nq_boundary, int nq_circle) {
  if (M < 2 || M > 48) throw ConfigError("hardy basis: M out of range");
  if (kmax < 1 || kmax > M)
    throw ConfigError("hardy basis: derivative order out of range");
  if (nq_boundary < 201 || nq_boundary % 2 == 0)
    throw ConfigError("hardy basis: boundary rule must be odd and >= 201");
  if (nq_circle < 4 * kmax + 8)
    throw ConfigError("hardy basis: circle rule too small");

  const Biholomorphism& bih = chain.bih();
  const TubularMap& map = bih.map();
  const double L = bih.L();
  const double delta = bih.delta();

  HardyBasis out;
  out.M = M;
  out.kmax = kmax;
  out.G = CMat::Zero(M, M);

  // Boundary part: composite Simpson along both edges with the arclength
  // factor m(s, +-delta).
  const double dsb = 2.0 * L / (nq_boundary - 1);
  Vec sw = simpson_weights(nq_boundary, dsb);
  CVec row(M);
  cplx corner[2][2];  // [side>0][sgn>0]
  for (int sg = 0; sg < 2; ++sg) {
    double tq = (sg == 0 ? -delta : delta);
    for (int i = 0; i < nq_boundary; ++i) {
      double s = -L + i * dsb;
      ChainPoint p = chain.uv(s, tq);
      basis_row(p, M, row);
      double arc = sw[i] * map.m(s, tq);
      out.G.selfadjointView<Eigen::Lower>().rankUpdate(row.conjugate(), arc);
    }
    corner[1][sg] = chain.uv(L, tq).u;
    corner[0][sg] = chain.uv(-L, tq).u;
  }
  out.G = CMat(out.G.selfadjointView<Eigen::Lower>());
  // Exact closure: the unit-circle arcs between each truncated corner and
  // the Moebius image of its strip end, integrated in closed form.
  for (int sd = 0; sd < 2; ++sd) {
    cplx wend = chain.end_point(sd == 0 ? -1 : 1);
    for (int sg = 0; sg < 2; ++sg) {
      double ph1 = std::arg(corner[sd][sg]);
      double dphi = std::remainder(std::arg(wend) - ph1, 2.0 * kPi);
      for (int m = 0; m < M; ++m)
        for (int n = 0; n < M; ++n) {
          int k = m - n;
          if (k == 0) {
            out.G(m, n) += std::abs(dphi);
          } else {
            cplx val = (std::exp(cplx(0.0, k * (ph1 + dphi))) -
                        std::exp(cplx(0.0, k * ph1))) /
                       cplx(0.0, static_cast<double>(k));
            out.G(m, n) += (dphi >= 0.0 ? val : -val);
          }
        }
    }
  }
  out.G = 0.5 * (out.G + out.G.adjoint()).eval();

  out.gram_dev =
      (out.G / (2.0 * kPi) - CMat::Identity(M, M)).cwiseAbs().maxCoeff();
  Eigen::SelfAdjointEigenSolver<CMat> ges(out.G, Eigen::EigenvaluesOnly);
  double gmin = ges.eigenvalues().minCoeff();
  if (!(gmin > 0.0))
    throw SolverError("hardy basis: boundary Gram not positive definite");
  out.gram_cond = ges.eigenvalues().maxCoeff() / gmin;

  // Derivative rows: trapezoid Cauchy integral on a physical circle well
  // inside the strip around the reference point.
  const double r0 = 0.35 * chain.data().dist_min;
  Eigen::Vector2d zc = map.to_xy(s_min, t_min);
  CMat V(nq_circle, M);
  for (int l = 0; l < nq_circle; ++l) {
    double ang = 2.0 * kPi * l / nq_circle;
    Eigen::Vector2d z =
        zc + r0 * Eigen::Vector2d(std::cos(ang), std::sin(ang));
    auto [s, t] = map.invert(z, s_min, t_min);
    ChainPoint p = chain.uv(s, t);
    basis_row(p, M, row);
    V.row(l) = row;
  }
  out.D = CMat::Zero(kmax, M);
  for (int j = 0; j < kmax; ++j) {
    CVec ph(nq_circle);
    for (int l = 0; l < nq_circle; ++l)
      ph[l] = std::exp(cplx(0.0, -2.0 * kPi * j * l / nq_circle));
    out.D.row(j) = (ph.transpose() * V) *
                   (factorial(j) / (nq_circle * std::pow(r0, j)));
  }
  return out;
}

double dH_closed(double g0_abs, int k) {
  if (k < 1) throw ConfigError("hardy: k must be >= 1");
  return std::sqrt(2.0 * kPi) / factorial(k - 1) *
         std::pow(g0_abs, k - 0.5);
}

HardyMinimizer dH_minimized(const HardyBasis& basis, int k) {
  if (k < 1 || k > basis.kmax)
    throw ConfigError("hardy: k outside the available derivative orders");
  if (basis.M < k + 8)
    throw ConfigError("hardy: truncation headroom requires M >= k + 8");
  CMat Dk = basis.D.topRows(k);
  Eigen::LLT<CMat> gll(basis.G);
  if (gll.info() != Eigen::Success)
    throw SolverError("hardy: Cholesky of the boundary Gram failed");
  CMat GiDh = gll.solve(Dk.adjoint());  // M x k
  CMat S = Dk * GiDh;                   // k x k, Hermitian PD if full rank
  Eigen::LLT<CMat> sll(S);
  if (sll.info() != Eigen::Success)
    throw SolverError("hardy: interpolation constraints rank-deficient");
  CMat Sinv = sll.solve(CMat::Identity(k, k));
  HardyMinimizer out;
  out.v = GiDh * Sinv;
  out.value = std::sqrt(Sinv(k - 1, k - 1).real());
  return out;
}

CVec hardy_taylor_project(const HardyBasis& basis, const CVec& u, int k) {
  if (u.size() != basis.M)
    throw ConfigError("hardy: coefficient vector has the wrong length");
  HardyMinimizer m = dH_minimized(basis, k);
  CVec der = basis.D.topRows(k) * u;
  return m.v * der;
}

EffectiveReport lambda_eff(const PotentialField& field,
                           const Biholomorphism& bih,
                           const std::vector<double>& h_ladder, int k_max,
                           int M, bool synthetic_quadratic, int nq_boundary,
                           int nq_circle) {
  if (h_ladder.empty()) throw ConfigError("effective: empty h ladder");
  for (double h : h_ladder)
    if (!(h > 0.0)) throw ConfigError("effective: h must be positive");
  if (k_max < 1 || k_max > 6)
    throw ConfigError("effective: k_max out of range");
  if (M < k_max + 8) throw ConfigError("effective: M too small for k_max");

  EffectiveReport rep;
  rep.minimum = locate_minimum(field);
  rep.assumption_ok = rep.minimum.interior && rep.minimum.nondegenerate &&
                      rep.minimum.unique_min &&
                      rep.minimum.strictly_below_straight;
  if (!rep.assumption_ok)
    throw AssumptionError(
        "effective: the potential minimum is degenerate, non-unique, or "
        "not strictly below the straight-strip floor");

  const double si = rep.minimum.s_min, ti = rep.minimum.t_min;
  const double pm = rep.minimum.phi_min;
  const double a = rep.minimum.a, b = rep.minimum.b;
  const TubularMap& map = bih.map();
  const double L = bih.L();
  const double delta = bih.delta();

  DiskChain chain(bih, si, ti);
  rep.g0_abs = chain.data().g0_abs;
  HardyBasis basis =
      hardy_basis(chain, si, ti, M, k_max + 1, nq_boundary, nq_circle);
  rep.gram_dev = basis.gram_dev;
  rep.gram_cond = basis.gram_cond;
  rep.M = M;
  rep.k_max = k_max;
  for (int k = 1; k <= k_max; ++k) {
    rep.dh.push_back(dH_closed(rep.g0_abs, k));
    rep.dh_min.push_back(dH_minimized(basis, k).value);
    rep.db.push_back(bargmann_dB(a, b, k));
  }

  // Graded tensor quadrature concentrated at the minimum: the fine window
  // covers 4.5 Gaussian widths of e^{-a y^2 / h} at the largest h.
  const double hmax = *std::max_element(h_ladder.begin(), h_ladder.end());
  const double s_hw = std::min(4.5 * 1.45 * std::sqrt(hmax / a), L);
  const double t_hw = std::min(4.5 * 1.45 * std::sqrt(hmax / b), delta);
  Quadrature qs = composite_gauss(
      graded_edges(-L, L, si, s_hw, 0.4, 0.75 * delta), 12);
  Quadrature qt = composite_gauss(
      graded_edges(-delta, delta, ti, t_hw, 0.12, 0.25 * delta), 12);
  const int nsq = static_cast<int>(qs.x.size());
  const int ntq = static_cast<int>(qt.x.size());
  const long nq = static_cast<long>(nsq) * ntq;

  // Synthetic mode: replace the exponent 2(phi - phi_min) by its exact
  // Hessian quadratic in the principal physical frame.
  Eigen::Matrix2d R = Eigen::Matrix2d::Identity();
  Eigen::Vector2d z0 = map.to_xy(si, ti);
  if (synthetic_quadratic) {
    double m0 = map.m(si, ti);
    Eigen::Matrix2d Hst, Ji;
    Hst << field.eval(si, ti, 2, 0), field.eval(si, ti, 1, 1),
        field.eval(si, ti, 1, 1), field.eval(si, ti, 0, 2);
    Ji << 1.0 / m0, 0.0, 0.0, 1.0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Ji * Hst * Ji);
    R = es.eigenvectors();
  }

  // Per-node chain and weight data (h independent).
  std::vector<cplx> uq(nq), chiq(nq);
  std::vector<double> wqm(nq), e2(nq);
  parallel_for(nsq, [&](int i) {
    double s = qs.x[i];
    for (int j = 0; j < ntq; ++j) {
      long idx = static_cast<long>(i) * ntq + j;
      double t = qt.x[j];
      ChainPoint p = chain.uv(s, t);
      uq[idx] = p.u;
      chiq[idx] = p.chi;
      wqm[idx] = qs.w[i] * qt.w[j] * map.m(s, t);
      if (synthetic_quadratic) {
        Eigen::Vector2d d = map.to_xy(s, t) - z0;
        double y1 = R(0, 0) * d[0] + R(1, 0) * d[1];
        double y2 = R(0, 1) * d[0] + R(1, 1) * d[1];
        e2[idx] = 0.5 * (a * y1 * y1 + b * y2 * y2);
      } else {
        e2[idx] = 2.0 * (field.eval(s, t) - pm);
      }
    }
  });

  CVec row(M);
  for (double h : h_ladder) {
    CMat Gt = CMat::Zero(M, M);
    for (long idx = 0; idx < nq; ++idx) {
      double wt = wqm[idx] * std::exp(-e2[idx] / h);
      if (wt == 0.0) continue;
      cplx pw(1.0, 0.0);
      for (int n = 0; n < M; ++n) {
        row[n] = chiq[idx] * pw;
        pw *= uq[idx];
      }
      Gt.selfadjointView<Eigen::Lower>().rankUpdate(row.conjugate(), wt);
    }
    Gt = CMat(Gt.selfadjointView<Eigen::Lower>());

    CMat A = h * basis.G;
    EffectiveEntry ent;
    ent.h = h;
    ent.g00 = Gt(0, 0).real();
    ent.lambda_scaled = pencil_lowest(A, Gt, k_max, "effective");
    Vec lo2 = pencil_lowest(A.topLeftCorner(M - 2, M - 2),
                            Gt.topLeftCorner(M - 2, M - 2), k_max,
                            "effective");
    Vec lo4 = pencil_lowest(A.topLeftCorner(M - 4, M - 4),
                            Gt.topLeftCorner(M - 4, M - 4), k_max,
                            "effective");
    ent.rr_monotone = true;
    ent.trunc_dev = 0.0;
    ent.lambda_log = Vec(k_max);
    ent.ratio = Vec(k_max);
    for (int k = 1; k <= k_max; ++k) {
      double lam = ent.lambda_scaled[k - 1];
      if (lam > lo2[k - 1] * (1.0 + 1e-12)) ent.rr_monotone = false;
      ent.trunc_dev =
          std::max(ent.trunc_dev, std::abs(lam - lo4[k - 1]) / lam);
      ent.lambda_log[k - 1] = std::log(lam) + 2.0 * pm / h;
      double rr = rep.dh[k - 1] / rep.db[k - 1];
      ent.ratio[k - 1] = lam * std::pow(h, k - 1) / (rr * rr);
    }
    rep.entries.push_back(ent);
  }
  return rep;
}

GapEntry gap_report(const EffectiveReport& rep, int idx,
                    double lambda_ess_pos) {
  if (!rep.assumption_ok)
    throw AssumptionError("effective: gap report requires a valid minimum");
  if (idx < 0 || idx >= static_cast<int>(rep.entries.size()))
    throw ConfigError("effective: gap report index out of range");
  if (!(lambda_ess_pos > 0.0))
    throw ConfigError("effective: threshold must be positive");
  const EffectiveEntry& ent = rep.entries[idx];
  GapEntry g;
  g.h = ent.h;
  g.threshold_log = std::log(lambda_ess_pos);
  g.margin_log = g.threshold_log - ent.lambda_log[0];
  g.in_gap = 0;
  for (int k = 0; k < static_cast<int>(ent.lambda_log.size()); ++k)
    if (ent.lambda_log[k] < g.threshold_log) ++g.in_gap;
  return g;
}

double intertwining_residual(const PotentialField& field,
                             const DiskChain& chain, double h, int n,
                             double step) {
  if (n < 0 || n > 48) throw ConfigError("intertwining: bad basis index");
  if (!(h > 0.0)) throw ConfigError("intertwining: h must be positive");
  const double dist = chain.data().dist_min;
  if (!(step > 0.0) || step > 0.2 * dist)
    throw ConfigError(
        "intertwining: step too large for the interior stencil");

  const TubularMap& map = chain.bih().map();
  const double si = chain.s_ref(), ti = chain.t_ref();
  const double pm = field.eval(si, ti);
  Eigen::Vector2d zc = map.to_xy(si, ti);

  // w = e^{-(phi - phi_min)/h} * b_n at a physical point.
  auto wfun = [&](const Eigen::Vector2d& z) {
    auto [s, t] = map.invert(z, si, ti);
    ChainPoint p = chain.uv(s, t);
    cplx bn = p.chi * std::pow(p.u, n);
    return std::exp(-(field.eval(s, t) - pm) / h) * bn;
  };

  const double rho = 0.3 * dist;
  double worst = 0.0, scale = 0.0;
  for (int l = 0; l < 8; ++l) {
    double ang = 2.0 * kPi * l / 8.0;
    Eigen::Vector2d z =
        zc + rho * Eigen::Vector2d(std::cos(ang), std::sin(ang));
    cplx wxp = wfun(z + Eigen::Vector2d(step, 0.0));
    cplx wxm = wfun(z - Eigen::Vector2d(step, 0.0));
    cplx wyp = wfun(z + Eigen::Vector2d(0.0, step));
    cplx wym = wfun(z - Eigen::Vector2d(0.0, step));
    cplx w0 = wfun(z);
    cplx dx = (wxp - wxm) / (2.0 * step);
    cplx dy = (wyp - wym) / (2.0 * step);
    auto [s, t] = map.invert(z, si, ti);
    Eigen::Vector2d A = field.vector_potential(s, t);
    cplx r = cplx(0.0, -h) * (dx + cplx(0.0, 1.0) * dy) -
             cplx(A[0], A[1]) * w0;
    worst = std::max(worst, std::abs(r));
    scale = std::max(scale, std::abs(w0));
  }
  if (!(scale > 0.0))
    throw SolverError("intertwining: sample vanished identically");
  return worst / scale;
}

}  // namespace sd
