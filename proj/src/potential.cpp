#include "stripdirac/potential.hpp"

#include <cmath>
#include <vector>

#include <Eigen/Sparse>

namespace sd {

double phi0(double t, double delta) { return 0.5 * (t * t - delta * delta); }

Mat weighted_poisson_solve(const TubularMap& map, int ns, int nt,
                           const std::function<double(double, double)>& rhs,
                           const std::function<double(double, double)>& bc) {
  if (ns < 7 || nt < 7)
    throw ConfigError("potential: grid must be at least 7 x 7");
  const double L = map.curve().L();
  const double delta = map.delta();
  const double ds = 2.0 * L / (ns - 1);
  const double dt = 2.0 * delta / (nt - 1);

  auto s_of = [&](int i) { return -L + i * ds; };
  auto t_of = [&](int j) { return -delta + j * dt; };

  // Dirichlet data on the full grid; interior values overwritten below.
  Mat values = Mat::Zero(ns, nt);
  for (int i = 0; i < ns; ++i) {
    values(i, 0) = bc(s_of(i), -delta);
    values(i, nt - 1) = bc(s_of(i), delta);
  }
  for (int j = 0; j < nt; ++j) {
    values(0, j) = bc(-L, t_of(j));
    values(ns - 1, j) = bc(L, t_of(j));
  }

  const int nsi = ns - 2, nti = nt - 2;
  const int nun = nsi * nti;
  auto idx = [&](int i, int j) { return (i - 1) * nti + (j - 1); };

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(nun) * 5);
  Vec b = Vec::Zero(nun);
  const double inv_ds2 = 1.0 / (ds * ds), inv_dt2 = 1.0 / (dt * dt);

  for (int i = 1; i <= nsi; ++i) {
    double s = s_of(i);
    for (int j = 1; j <= nti; ++j) {
      double t = t_of(j);
      int row = idx(i, j);
      // Half-node metric factors keep the stencil symmetric positive
      // definite in divergence form.
      double cw = inv_ds2 / map.m(s - 0.5 * ds, t);
      double ce = inv_ds2 / map.m(s + 0.5 * ds, t);
      double cs = inv_dt2 * map.m(s, t - 0.5 * dt);
      double cn = inv_dt2 * map.m(s, t + 0.5 * dt);
      double diag = cw + ce + cs + cn;
      trip.emplace_back(row, row, diag);
      b[row] = -rhs(s, t);  // negated so the system is SPD

      if (i > 1)
        trip.emplace_back(row, idx(i - 1, j), -cw);
      else
        b[row] += cw * values(0, j);
      if (i < nsi)
        trip.emplace_back(row, idx(i + 1, j), -ce);
      else
        b[row] += ce * values(ns - 1, j);
      if (j > 1)
        trip.emplace_back(row, idx(i, j - 1), -cs);
      else
        b[row] += cs * values(i, 0);
      if (j < nti)
        trip.emplace_back(row, idx(i, j + 1), -cn);
      else
        b[row] += cn * values(i, nt - 1);
    }
  }

  Eigen::SparseMatrix<double> A(nun, nun);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> solver;
  solver.compute(A);
  if (solver.info() != Eigen::Success)
    throw SolverError("potential: factorization of the stiffness matrix failed");
  Vec sol = solver.solve(b);
  if (solver.info() != Eigen::Success)
    throw SolverError("potential: linear solve failed");

  for (int i = 1; i <= nsi; ++i)
    for (int j = 1; j <= nti; ++j) values(i, j) = sol[idx(i, j)];

  return values;
}

PotentialField::PotentialField(TubularMap map, int ns, int nt)
    : map_(std::move(map)), ns_(ns), nt_(nt) {
  const double L = map_.curve().L();
  const double delta = map_.delta();
  // phi0 vanishes at t = +-delta, so it encodes both the homogeneous
  // condition on the strip boundary and the straight-strip profile at the
  // artificial ends.
  values_ = weighted_poisson_solve(
      map_, ns_, nt_, [this](double s, double t) { return map_.m(s, t); },
      [delta](double, double t) { return phi0(t, delta); });
  ds_ = 2.0 * L / (ns_ - 1);
  dt_ = 2.0 * delta / (nt_ - 1);
  spline_ = Spline2D(-L, ds_, -delta, dt_, values_);
}

double PotentialField::eval(double s, double t, int dxs, int dxt) const {
  return spline_.ev(s, t, dxs, dxt);
}

Eigen::Vector2d PotentialField::grad_xy(double s, double t) const {
  double gs = eval(s, t, 1, 0), gt = eval(s, t, 0, 1);
  double m = map_.m(s, t);
  Eigen::Vector2d tau = map_.curve().tangent(s);
  Eigen::Vector2d nor = map_.curve().normal(s);
  return (gs / m) * tau + gt * nor;
}

Eigen::Vector2d PotentialField::vector_potential(double s, double t) const {
  Eigen::Vector2d g = grad_xy(s, t);
  return Eigen::Vector2d(-g[1], g[0]);
}

std::pair<Vec, Vec> PotentialField::boundary_normal_derivative() const {
  const double L = map_.curve().L();
  const double delta = map_.delta();
  Vec top(ns_), bot(ns_);
  for (int i = 0; i < ns_; ++i) {
    double s = -L + i * ds_;
    top[i] = eval(s, delta, 0, 1);    // outward normal is +t
    bot[i] = -eval(s, -delta, 0, 1);  // outward normal is -t
  }
  return {top, bot};
}

MinimumReport locate_minimum(const PotentialField& field) {
  const int ns = field.ns(), nt = field.nt();
  const Mat& F = field.values();
  const double L = field.L(), delta = field.delta();
  const double ds = field.ds(), dt = field.dt();

  // Grid argmin over interior nodes.
  int ib = 1, jb = 1;
  double best = F(1, 1);
  for (int i = 1; i < ns - 1; ++i)
    for (int j = 1; j < nt - 1; ++j)
      if (F(i, j) < best) {
        best = F(i, j);
        ib = i;
        jb = j;
      }

  double s = -L + ib * ds, t = -delta + jb * dt;

  // Newton refinement on the spline gradient; fall back to refining only
  // the transverse coordinate when the Hessian is (near) singular, which
  // happens for the flat valley of the straight strip.
  bool full_newton = true;
  for (int it = 0; it < 60; ++it) {
    double gs = field.eval(s, t, 1, 0), gt = field.eval(s, t, 0, 1);
    double hss = field.eval(s, t, 2, 0), hst = field.eval(s, t, 1, 1),
           htt = field.eval(s, t, 0, 2);
    double det = hss * htt - hst * hst;
    double step_s = 0.0, step_t = 0.0;
    if (std::abs(det) > 1e-10 * (std::abs(hss * htt) + 1.0)) {
      step_s = (htt * gs - hst * gt) / det;
      step_t = (hss * gt - hst * gs) / det;
    } else {
      full_newton = false;
      if (std::abs(htt) < 1e-14) break;
      step_t = gt / htt;
    }
    double cap = 2.0 * std::max(ds, dt);
    step_s = std::min(std::max(step_s, -cap), cap);
    step_t = std::min(std::max(step_t, -cap), cap);
    s -= step_s;
    t -= step_t;
    s = std::min(std::max(s, -L), L);
    t = std::min(std::max(t, -delta), delta);
    if (std::abs(step_s) < 1e-14 && std::abs(step_t) < 1e-14) break;
  }

  MinimumReport rep;
  rep.s_min = s;
  rep.t_min = t;
  rep.phi_min = field.eval(s, t);
  rep.d0 = -rep.phi_min - 0.5 * delta * delta;

  // Physical Hessian: at a critical point the coordinate Hessian
  // transforms by congruence with J^{-1} = diag(1/m, 1).
  double m = field.map().m(s, t);
  Eigen::Matrix2d H;
  H << field.eval(s, t, 2, 0) / (m * m), field.eval(s, t, 1, 1) / m,
      field.eval(s, t, 1, 1) / m, field.eval(s, t, 0, 2);
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(H);
  rep.a = 2.0 * es.eigenvalues()[0];
  rep.b = 2.0 * es.eigenvalues()[1];

  rep.interior = std::abs(s) < L - 2.0 * ds && std::abs(t) < delta - 1e-12;
  rep.nondegenerate = rep.a > 1e-6 && full_newton;
  rep.strictly_below_straight = rep.phi_min < -0.5 * delta * delta - 1e-10;

  // Uniqueness: count interior grid-local minima that tie with the global
  // grid minimum.  A flat valley (straight strip) produces a whole line of
  // equal minima and fails the test.
  double grid_min = F(ib, jb);
  double tie = 1e-9 * (1.0 + std::abs(grid_min));
  int close_minima = 0;
  for (int i = 1; i < ns - 1; ++i)
    for (int j = 1; j < nt - 1; ++j) {
      double v = F(i, j);
      if (v <= F(i - 1, j) && v <= F(i + 1, j) && v <= F(i, j - 1) &&
          v <= F(i, j + 1) && v <= grid_min + tie)
        ++close_minima;
    }
  rep.unique_min = close_minima == 1;

  return rep;
}

}  // namespace sd
