#include "stripdirac/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "stripdirac/potential.hpp"

namespace sd {

namespace {

// Trapezoid edge contributions of the reconstructed differential
//   omega = (m beta_t) ds + (-beta_s / m) dt
// around one grid cell; the circulation measures path dependence.
struct OneForm {
  const TubularMap& map;
  const Spline2D& spb;
  double ws(double s, double t) const {
    return map.m(s, t) * spb.ev(s, t, 0, 1);
  }
  double wt(double s, double t) const {
    return -spb.ev(s, t, 1, 0) / map.m(s, t);
  }
};

}  // namespace

Biholomorphism::Biholomorphism(TubularMap map, int ns, int nt)
    : map_(std::move(map)), ns_(ns | 1), nt_(nt | 1) {
  if (ns_ < 9 || nt_ < 9)
    throw ConfigError("conformal: grid must be at least 9 x 9");
  const double L = map_.curve().L();
  const double delta = map_.delta();
  ds_ = 2.0 * L / (ns_ - 1);
  dt_ = 2.0 * delta / (nt_ - 1);

  // beta = t on the whole boundary: exact on t = +-delta, and the strip is
  // straight near the artificial ends so the transverse coordinate is
  // already harmonic there.
  bvals_ = weighted_poisson_solve(
      map_, ns_, nt_, [](double, double) { return 0.0; },
      [](double, double t) { return t; });
  spb_ = Spline2D(-L, ds_, -delta, dt_, bvals_);

  auto s_of = [&](int i) { return -L + i * ds_; };
  auto t_of = [&](int j) { return -delta + j * dt_; };

  // alpha on the center line t = 0 from alpha_s = m beta_t, integrated
  // outward from s = 0 by Simpson steps with spline values at midpoints.
  auto q0 = [&](double x) { return map_.m(x, 0.0) * spb_.ev(x, 0.0, 0, 1); };
  const int i0 = ns_ / 2;
  Vec a_line = Vec::Zero(ns_);
  for (int i = i0; i < ns_ - 1; ++i) {
    double sl = s_of(i), sr = s_of(i + 1);
    a_line[i + 1] =
        a_line[i] + ds_ / 6.0 * (q0(sl) + 4.0 * q0(sl + 0.5 * ds_) + q0(sr));
  }
  for (int i = i0; i > 0; --i) {
    double sr = s_of(i), sl = s_of(i - 1);
    a_line[i - 1] =
        a_line[i] - ds_ / 6.0 * (q0(sr) + 4.0 * q0(sr - 0.5 * ds_) + q0(sl));
  }

  // Extend along each column with alpha_t = -beta_s / m from the center
  // row outward.
  const int j0 = nt_ / 2;
  avals_ = Mat::Zero(ns_, nt_);
  for (int i = 0; i < ns_; ++i) {
    double s = s_of(i);
    auto g = [&](double v) { return -spb_.ev(s, v, 1, 0) / map_.m(s, v); };
    avals_(i, j0) = a_line[i];
    for (int j = j0; j < nt_ - 1; ++j) {
      double tl = t_of(j), tr = t_of(j + 1);
      avals_(i, j + 1) =
          avals_(i, j) + dt_ / 6.0 * (g(tl) + 4.0 * g(tl + 0.5 * dt_) + g(tr));
    }
    for (int j = j0; j > 0; --j) {
      double tr = t_of(j), tl = t_of(j - 1);
      avals_(i, j - 1) =
          avals_(i, j) - dt_ / 6.0 * (g(tr) + 4.0 * g(tr - 0.5 * dt_) + g(tl));
    }
  }
  spa_ = Spline2D(-L, ds_, -delta, dt_, avals_);

  // Diagnostics: Cauchy-Riemann defect at fixed physical stations (grid
  // independent, so refinement comparisons measure the same functional),
  // cell circulations, max |beta - t|, and the range of |F'| over the
  // grid.
  for (int i = 0; i <= 24; ++i)
    for (int j = 0; j <= 8; ++j) {
      double s = -0.96 * L + i * (1.92 * L / 24.0);
      double t = -0.8 * delta + j * (1.6 * delta / 8.0);
      double d = spa_.ev(s, t, 1, 0) - map_.m(s, t) * spb_.ev(s, t, 0, 1);
      cr_res_ = std::max(cr_res_, std::abs(d));
    }

  OneForm w{map_, spb_};
  for (int i = 0; i + 1 < ns_; i += 8)
    for (int j = 0; j + 1 < nt_; j += 4) {
      double sl = s_of(i), sr = s_of(i + 1);
      double tb = t_of(j), tt = t_of(j + 1);
      double circ = 0.5 * ds_ * (w.ws(sl, tb) + w.ws(sr, tb)) +
                    0.5 * dt_ * (w.wt(sr, tb) + w.wt(sr, tt)) -
                    0.5 * ds_ * (w.ws(sl, tt) + w.ws(sr, tt)) -
                    0.5 * dt_ * (w.wt(sl, tb) + w.wt(sl, tt));
      loop_res_ = std::max(loop_res_, std::abs(circ));
    }

  double min_fp = std::numeric_limits<double>::infinity();
  for (int i = 0; i < ns_; ++i)
    for (int j = 0; j < nt_; ++j) {
      double s = s_of(i), t = t_of(j);
      beta_dev_ = std::max(beta_dev_, std::abs(bvals_(i, j) - t));
      double bt = spb_.ev(s, t, 0, 1), bs = spb_.ev(s, t, 1, 0);
      double mag = std::hypot(bt, bs / map_.m(s, t));
      sup_fp_ = std::max(sup_fp_, mag);
      min_fp = std::min(min_fp, mag);
    }
  if (!(min_fp > 1e-12))
    throw SolverError("conformal: derivative of the straightening map "
                      "vanishes on the grid");
  sup_fpinv_ = 1.0 / min_fp;
}

double Biholomorphism::beta(double s, double t, int dxs, int dxt) const {
  return spb_.ev(s, t, dxs, dxt);
}

double Biholomorphism::alpha(double s, double t, int dxs, int dxt) const {
  return spa_.ev(s, t, dxs, dxt);
}

cplx Biholomorphism::f(double s, double t) const {
  return cplx(spa_.ev(s, t, 0, 0), spb_.ev(s, t, 0, 0));
}

cplx Biholomorphism::fprime(double s, double t) const {
  double m = map_.m(s, t);
  double bt = spb_.ev(s, t, 0, 1), bs = spb_.ev(s, t, 1, 0);
  double th = map_.curve().theta(s);
  return std::exp(cplx(0.0, -th)) * cplx(bt, bs / m);
}

std::pair<double, double> Biholomorphism::inverse(cplx zeta) const {
  const double L = map_.curve().L();
  const double delta = map_.delta();
  double s = std::clamp(zeta.real(), -L, L);
  double t = std::clamp(zeta.imag(), -delta, delta);
  const double tol = 1e-12 * (1.0 + std::abs(zeta));
  for (int it = 0; it < 100; ++it) {
    double rx = spa_.ev(s, t, 0, 0) - zeta.real();
    double ry = spb_.ev(s, t, 0, 0) - zeta.imag();
    if (std::hypot(rx, ry) <= tol) return {s, t};
    double as = spa_.ev(s, t, 1, 0), at = spa_.ev(s, t, 0, 1);
    double bs = spb_.ev(s, t, 1, 0), bt = spb_.ev(s, t, 0, 1);
    double det = as * bt - at * bs;
    if (std::abs(det) < 1e-14)
      throw SolverError("conformal: singular Jacobian in inverse iteration");
    s -= (bt * rx - at * ry) / det;
    t -= (as * ry - bs * rx) / det;
    s = std::clamp(s, -L, L);
    t = std::clamp(t, -delta, delta);
  }
  throw SolverError("conformal: inverse iteration did not converge");
}

double Biholomorphism::c1_deviation() const {
  const double L = map_.curve().L();
  const double delta = map_.delta();
  const int nse = 161, nte = 17;
  double dev0 = 0.0, dev1 = 0.0;
  for (int i = 0; i < nse; ++i) {
    double s = -L + 2.0 * L * i / (nse - 1);
    for (int j = 0; j < nte; ++j) {
      double t = -delta + 2.0 * delta * j / (nte - 1);
      dev0 = std::max(dev0, std::abs(f(s, t) - cplx(s, t)));
      dev1 = std::max({dev1, std::abs(spa_.ev(s, t, 1, 0) - 1.0),
                       std::abs(spa_.ev(s, t, 0, 1)),
                       std::abs(spb_.ev(s, t, 1, 0)),
                       std::abs(spb_.ev(s, t, 0, 1) - 1.0)});
    }
  }
  return dev0 + dev1;
}

DiskMapData disk_derivative(const Biholomorphism& bih, double s_min,
                            double t_min) {
  const double delta = bih.delta();
  if (std::abs(t_min) >= delta - 1e-12)
    throw AssumptionError("conformal: reference point lies on the strip "
                          "boundary");
  DiskMapData d;
  d.f_min = bih.f(s_min, t_min);
  d.fp_min = bih.fprime(s_min, t_min);
  const double c = kPi / (4.0 * delta);
  d.w0 = std::tanh(c * d.f_min);
  if (std::abs(d.w0) > 0.999)
    throw AssumptionError("conformal: disk image of the reference point is "
                          "too close to the boundary");
  d.mobius_factor = 1.0 - std::norm(d.w0);
  d.sigma_factor = (4.0 * delta / kPi) / std::abs(1.0 - d.w0 * d.w0);
  d.g0_abs = d.mobius_factor * d.sigma_factor / std::abs(d.fp_min);
  d.dist_min = delta - std::abs(t_min);
  d.koebe_ok =
      d.g0_abs >= 0.5 * d.dist_min && d.g0_abs <= 2.0 * d.dist_min;
  return d;
}

DiskChain::DiskChain(const Biholomorphism& bih, double s_min, double t_min)
    : bih_(bih),
      s_ref_(s_min),
      t_ref_(t_min),
      data_(disk_derivative(bih, s_min, t_min)) {}

ChainPoint DiskChain::uv(double s, double t) const {
  const double delta = bih_.delta();
  const double c = kPi / (4.0 * delta);
  cplx zeta = bih_.f(s, t);
  cplx fp = bih_.fprime(s, t);
  if (fp.real() <= 0.0)
    throw AssumptionError("conformal: derivative leaves the right half "
                          "plane; square-root branch not trackable");
  cplx ch = std::cosh(c * zeta);
  cplx w = std::tanh(c * zeta);
  cplx sig_p = c / (ch * ch);
  cplx den = 1.0 - std::conj(data_.w0) * w;
  cplx mob_p = (1.0 - std::norm(data_.w0)) / (den * den);
  ChainPoint p;
  p.u = (w - data_.w0) / den;
  p.chi = std::sqrt(mob_p) * std::sqrt(sig_p) * std::sqrt(fp);
  return p;
}

cplx DiskChain::end_point(int side) const {
  cplx sd(static_cast<double>(side), 0.0);
  return (sd - data_.w0) / (1.0 - std::conj(data_.w0) * sd);
}

}  // namespace sd
