#include "stripdirac/interp.hpp"

#include <cmath>

namespace sd {

namespace {

// Solve the clamped cubic B-spline coefficient system for one axis.
// samples: f at n uniform nodes, h: spacing.  Returns n+2 coefficients
// c_{-1}..c_n stored with index shift +1.
Vec spline_coeffs_1d(const Vec& samples, double h) {
  int n = static_cast<int>(samples.size());
  double d0 = (-25.0 * samples[0] + 48.0 * samples[1] - 36.0 * samples[2] +
               16.0 * samples[3] - 3.0 * samples[4]) /
              (12.0 * h);
  double d1 = (25.0 * samples[n - 1] - 48.0 * samples[n - 2] +
               36.0 * samples[n - 3] - 16.0 * samples[n - 4] +
               3.0 * samples[n - 5]) /
              (12.0 * h);

  // Tridiagonal system for c_0..c_{n-1} after eliminating the ghost
  // coefficients with the clamped-slope relations.
  Vec diag = Vec::Constant(n, 4.0), lower = Vec::Constant(n, 1.0),
      upper = Vec::Constant(n, 1.0), rhs(n);
  for (int k = 0; k < n; ++k) rhs[k] = 6.0 * samples[k];
  upper[0] = 2.0;
  rhs[0] += 2.0 * h * d0;
  lower[n - 1] = 2.0;
  rhs[n - 1] -= 2.0 * h * d1;

  // Thomas algorithm.
  Vec cp(n), dp(n);
  cp[0] = upper[0] / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (int k = 1; k < n; ++k) {
    double m = diag[k] - lower[k] * cp[k - 1];
    cp[k] = upper[k] / m;
    dp[k] = (rhs[k] - lower[k] * dp[k - 1]) / m;
  }
  Vec c(n + 2);
  c[n] = dp[n - 1];
  for (int k = n - 2; k >= 0; --k) c[k + 1] = dp[k] - cp[k] * c[k + 2];
  c[0] = c[2] - 2.0 * h * d0;          // ghost c_{-1}
  c[n + 1] = c[n - 1] + 2.0 * h * d1;  // ghost c_n
  return c;
}

// Cubic B-spline basis values (or derivatives) on the unit cell, u in [0,1].
// out[m] multiplies coefficient c_{k-1+m}.  Derivatives carry no 1/h factor.
void bspline_basis(double u, int order, double out[4]) {
  switch (order) {
    case 0: {
      double v = 1.0 - u;
      out[0] = v * v * v / 6.0;
      out[1] = (3.0 * u * u * u - 6.0 * u * u + 4.0) / 6.0;
      out[2] = (-3.0 * u * u * u + 3.0 * u * u + 3.0 * u + 1.0) / 6.0;
      out[3] = u * u * u / 6.0;
      break;
    }
    case 1: {
      double v = 1.0 - u;
      out[0] = -v * v / 2.0;
      out[1] = (3.0 * u * u - 4.0 * u) / 2.0;
      out[2] = (-3.0 * u * u + 2.0 * u + 1.0) / 2.0;
      out[3] = u * u / 2.0;
      break;
    }
    case 2: {
      out[0] = 1.0 - u;
      out[1] = 3.0 * u - 2.0;
      out[2] = -3.0 * u + 1.0;
      out[3] = u;
      break;
    }
    default:
      throw ConfigError("Spline2D: derivative order must be 0, 1 or 2");
  }
}

}  // namespace

Spline2D::Spline2D(double s0, double ds, double t0, double dt, const Mat& F)
    : s0_(s0), ds_(ds), t0_(t0), dt_(dt),
      ns_(static_cast<int>(F.rows())), nt_(static_cast<int>(F.cols())) {
  if (ns_ < 5 || nt_ < 5)
    throw ConfigError("Spline2D: need at least 5 samples per axis");
  // Pass 1: spline along t for every s row.
  Mat Ct(ns_, nt_ + 2);
  for (int i = 0; i < ns_; ++i)
    Ct.row(i) = spline_coeffs_1d(F.row(i).transpose(), dt_).transpose();
  // Pass 2: spline along s for every t-coefficient column.
  C_.resize(ns_ + 2, nt_ + 2);
  for (int j = 0; j < nt_ + 2; ++j)
    C_.col(j) = spline_coeffs_1d(Ct.col(j), ds_);
}

double Spline2D::ev(double s, double t, int dxs, int dxt) const {
  double us = (s - s0_) / ds_;
  double ut = (t - t0_) / dt_;
  int k = static_cast<int>(std::floor(us));
  int l = static_cast<int>(std::floor(ut));
  k = std::min(std::max(k, 0), ns_ - 2);
  l = std::min(std::max(l, 0), nt_ - 2);
  us -= k;
  ut -= l;
  double bs[4], bt[4];
  bspline_basis(us, dxs, bs);
  bspline_basis(ut, dxt, bt);
  double acc = 0.0;
  for (int m = 0; m < 4; ++m) {
    double row = 0.0;
    for (int n = 0; n < 4; ++n) row += C_(k + m, l + n) * bt[n];
    acc += bs[m] * row;
  }
  double scale = 1.0;
  for (int i = 0; i < dxs; ++i) scale /= ds_;
  for (int i = 0; i < dxt; ++i) scale /= dt_;
  return acc * scale;
}

Hermite1D::Hermite1D(double x0, double dx, Vec y, Vec yp)
    : x0_(x0), dx_(dx), y_(std::move(y)), yp_(std::move(yp)) {
  if (y_.size() != yp_.size() || y_.size() < 2)
    throw ConfigError("Hermite1D: bad table sizes");
}

double Hermite1D::ev(double x) const {
  int n = static_cast<int>(y_.size());
  double u = (x - x0_) / dx_;
  int k = static_cast<int>(std::floor(u));
  k = std::min(std::max(k, 0), n - 2);
  u -= k;
  double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
  double h10 = u * (1.0 - u) * (1.0 - u);
  double h01 = u * u * (3.0 - 2.0 * u);
  double h11 = u * u * (u - 1.0);
  return h00 * y_[k] + h01 * y_[k + 1] +
         dx_ * (h10 * yp_[k] + h11 * yp_[k + 1]);
}

double Hermite1D::ev_prime(double x) const {
  int n = static_cast<int>(y_.size());
  double u = (x - x0_) / dx_;
  int k = static_cast<int>(std::floor(u));
  k = std::min(std::max(k, 0), n - 2);
  u -= k;
  double g00 = 6.0 * u * (u - 1.0);
  double g10 = (1.0 - u) * (1.0 - 3.0 * u);
  double g01 = -g00;
  double g11 = u * (3.0 * u - 2.0);
  return (g00 * y_[k] + g01 * y_[k + 1]) / dx_ + g10 * yp_[k] +
         g11 * yp_[k + 1];
}

}  // namespace sd
