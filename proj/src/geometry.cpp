#include "stripdirac/geometry.hpp"

#include <cmath>

namespace sd {

namespace {

// C-infinity step: 0 for u <= 0, 1 for u >= 1, smooth transition between.
double smoothstep(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  double f = std::exp(-1.0 / u);
  double g = std::exp(-1.0 / (1.0 - u));
  return f / (f + g);
}

double smoothstep_prime(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  double f = std::exp(-1.0 / u);
  double g = std::exp(-1.0 / (1.0 - u));
  double fp = f / (u * u);
  double gp = -g / ((1.0 - u) * (1.0 - u));
  double denom = f + g;
  return (fp * g - f * gp) / (denom * denom);
}

}  // namespace

void CurveProfile::validate() const {
  if (w <= 0.0 || ramp <= 0.0 || L0 <= 0.0)
    throw ConfigError("curve profile: w, L0, ramp must be positive");
  if (L0 < ramp)
    throw ConfigError("curve profile: need L0 >= ramp for smoothness");
}

double CurveProfile::kappa(double s) const {
  double a = std::abs(s);
  if (a >= L0) return 0.0;
  return amp * std::exp(-(s / w) * (s / w)) * smoothstep((L0 - a) / ramp);
}

double CurveProfile::kappa_prime(double s) const {
  double a = std::abs(s);
  if (a >= L0) return 0.0;
  double g = amp * std::exp(-(s / w) * (s / w));
  double gp = -2.0 * s / (w * w) * g;
  double u = (L0 - a) / ramp;
  double c = smoothstep(u);
  double cp = smoothstep_prime(u) * (s >= 0.0 ? -1.0 : 1.0) / ramp;
  return gp * c + g * cp;
}

Curve::Curve(const CurveProfile& profile, double L)
    : profile_(profile), L_(L) {
  profile_.validate();
  if (L <= 0.0) throw ConfigError("curve: L must be positive");

  // Integrate (theta, x, y)' = (kappa, cos theta, sin theta) with RK4 from
  // s = -L so the table covers the whole window in one sweep, then shift so
  // that gamma(0) = 0 and theta(0) = 0.
  int n = std::max(20001, static_cast<int>(std::ceil(2.0 * L / 0.002)) + 1);
  if (n % 2 == 0) ++n;
  double ds = 2.0 * L / (n - 1);
  Vec th(n), gx(n), gy(n), gxp(n), gyp(n), thp(n);
  double theta = 0.0, x = 0.0, y = 0.0;
  th[0] = 0.0;
  gx[0] = 0.0;
  gy[0] = 0.0;
  for (int i = 1; i < n; ++i) {
    double s = -L + (i - 1) * ds;
    auto f = [this](double sv, double thv, double* d) {
      d[0] = profile_.kappa(sv);
      d[1] = std::cos(thv);
      d[2] = std::sin(thv);
    };
    double k1[3], k2[3], k3[3], k4[3];
    f(s, theta, k1);
    f(s + 0.5 * ds, theta + 0.5 * ds * k1[0], k2);
    f(s + 0.5 * ds, theta + 0.5 * ds * k2[0], k3);
    f(s + ds, theta + ds * k3[0], k4);
    theta += ds / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]);
    x += ds / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]);
    y += ds / 6.0 * (k1[2] + 2.0 * k2[2] + 2.0 * k3[2] + k4[2]);
    th[i] = theta;
    gx[i] = x;
    gy[i] = y;
  }
  int mid = (n - 1) / 2;  // index of s = 0
  double th0 = th[mid], x0 = gx[mid], y0 = gy[mid];
  double c0 = std::cos(th0), s0 = std::sin(th0);
  for (int i = 0; i < n; ++i) {
    double dx = gx[i] - x0, dy = gy[i] - y0;
    // Rotate by -theta(0) so the tangent at s=0 is horizontal.
    gx[i] = c0 * dx + s0 * dy;
    gy[i] = -s0 * dx + c0 * dy;
    th[i] -= th0;
    double s = -L + i * ds;
    thp[i] = profile_.kappa(s);
    gxp[i] = std::cos(th[i]);
    gyp[i] = std::sin(th[i]);
    max_abs_kappa_ = std::max(max_abs_kappa_, std::abs(thp[i]));
  }
  theta_tab_ = Hermite1D(-L, ds, th, thp);
  gx_tab_ = Hermite1D(-L, ds, gx, gxp);
  gy_tab_ = Hermite1D(-L, ds, gy, gyp);
}

double Curve::theta(double s) const {
  if (s > L_) return theta_tab_.ev(L_);
  if (s < -L_) return theta_tab_.ev(-L_);
  return theta_tab_.ev(s);
}

Eigen::Vector2d Curve::gamma(double s) const {
  // Straight continuation outside the table window (kappa vanishes there
  // whenever L >= L0, so this is exact).
  if (s > L_ || s < -L_) {
    double se = (s > L_) ? L_ : -L_;
    Eigen::Vector2d base(gx_tab_.ev(se), gy_tab_.ev(se));
    return base + (s - se) * tangent(se);
  }
  return Eigen::Vector2d(gx_tab_.ev(s), gy_tab_.ev(s));
}

Eigen::Vector2d Curve::tangent(double s) const {
  double th = theta(s);
  return Eigen::Vector2d(std::cos(th), std::sin(th));
}

Eigen::Vector2d Curve::normal(double s) const {
  double th = theta(s);
  return Eigen::Vector2d(-std::sin(th), std::cos(th));
}

TubularMap::TubularMap(Curve curve, double delta)
    : curve_(std::move(curve)), delta_(delta) {
  if (delta <= 0.0) throw ConfigError("tubular map: delta must be positive");
  if (delta * curve_.max_abs_kappa() >= 1.0)
    throw AssumptionError(
        "tubular map: delta * sup|kappa| >= 1, coordinates degenerate");
}

double TubularMap::m(double s, double t) const {
  return 1.0 - t * curve_.kappa(s);
}

Eigen::Vector2d TubularMap::to_xy(double s, double t) const {
  return curve_.gamma(s) + t * curve_.normal(s);
}

std::pair<double, double> TubularMap::invert(const Eigen::Vector2d& xy,
                                             double s0, double t0) const {
  double s = s0, t = t0;
  for (int it = 0; it < 100; ++it) {
    Eigen::Vector2d r = to_xy(s, t) - xy;
    if (r.norm() < 1e-13 * (1.0 + xy.norm())) return {s, t};
    double th = curve_.theta(s), mm = m(s, t);
    Eigen::Matrix2d J;
    // d(to_xy)/ds = m * tangent, d(to_xy)/dt = normal.
    J << mm * std::cos(th), -std::sin(th), mm * std::sin(th), std::cos(th);
    Eigen::Vector2d step = J.partialPivLu().solve(r);
    s -= step[0];
    t -= step[1];
  }
  throw SolverError("tubular map: chart inversion did not converge");
}

}  // namespace sd
