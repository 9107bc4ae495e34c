#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "stripdirac/effective.hpp"
#include "stripdirac/fiber.hpp"

using namespace sd;
using sd::fiber::Threshold;
using sd::fiber::threshold_pos;

namespace {

TubularMap straight_map(double delta = 1.0, double L = 6.0) {
  CurveProfile p{0.0, 1.0, 2.0, 1.0};
  return TubularMap(Curve(p, L), delta);
}

// One-parameter family of geometrically similar bumps: delta = sigma and
// curvature amp = 0.9 / sigma, so the potential landscape rescales exactly
// and the Hessian pair (a, b) is sigma-independent.
TubularMap bump_map(double sigma = 1.0) {
  CurveProfile p{0.9 / sigma, 1.6 * sigma, 3.5 * sigma, 1.2 * sigma};
  return TubularMap(Curve(p, 9.5 * sigma), sigma);
}

struct BumpFixture {
  PotentialField field;
  Biholomorphism bih;
  MinimumReport min;
  BumpFixture(double sigma, int ns, int nt)
      : field(bump_map(sigma), ns, nt),
        bih(bump_map(sigma), ns, nt),
        min(locate_minimum(field)) {}
};

const BumpFixture& bump1() {
  static BumpFixture fx(1.0, 951, 81);
  return fx;
}

const BumpFixture& bump4() {
  static BumpFixture fx(4.0, 951, 81);
  return fx;
}

const Biholomorphism& straight_bih() {
  static Biholomorphism bih(straight_map(), 121, 17);
  return bih;
}

}  // namespace

TEST_CASE("bargmann: isotropic weight keeps the monomials with closed norms") {
  BargmannBasis B = bargmann_orthogonalize(1.0, 1.0, 7);
  CHECK(B.a == 1.0);
  CHECK(B.b == 1.0);
  for (int m = 0; m < 7; ++m) {
    for (int j = 0; j < 7; ++j) {
      double want = (j == m) ? 1.0 : 0.0;
      CHECK(std::abs(B.coeff(m, j) - want) < 1e-8);
    }
    CHECK(B.norm[m] ==
          doctest::Approx(bargmann_norm_closed(1.0, 1.0, m)).epsilon(1e-8));
  }
  // Ground norm is the Gaussian mass: d_B^1 = sqrt(2 pi).
  CHECK(bargmann_dB(1.0, 1.0, 1) ==
        doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
}

TEST_CASE("bargmann: anisotropic weight matches the Hermite closed form") {
  const double a = 0.5, b = 1.5;
  BargmannBasis B = bargmann_orthogonalize(a, b, 7);
  for (int m = 0; m < 7; ++m) {
    Vec c = bargmann_coeff_closed(a, b, m);
    for (int j = 0; j <= m; ++j) CHECK(std::abs(B.coeff(m, j) - c[j]) < 1e-8);
    CHECK(B.norm[m] ==
          doctest::Approx(bargmann_norm_closed(a, b, m)).epsilon(1e-8));
  }
  for (int k = 1; k <= 5; ++k) {
    double fact = 1.0;
    for (int j = 2; j < k; ++j) fact *= j;
    CHECK(B.norm[k - 1] / fact ==
          doctest::Approx(bargmann_dB(a, b, k)).epsilon(1e-8));
  }
}

TEST_CASE("bargmann: strongly anisotropic quadrature route stays accurate") {
  // Hessian pair of the reference bump family.
  const double a = 0.064646, b = 1.935324;
  BargmannBasis B = bargmann_orthogonalize(a, b, 7);
  for (int m = 0; m < 7; ++m) {
    CHECK(B.norm[m] ==
          doctest::Approx(bargmann_norm_closed(a, b, m)).epsilon(1e-6));
    Vec c = bargmann_coeff_closed(a, b, m);
    for (int j = 0; j <= m; ++j)
      CHECK(std::abs(B.coeff(m, j) - c[j]) < 1e-6 * (1.0 + std::abs(c[j])));
  }
}

TEST_CASE("bargmann: configuration guards") {
  CHECK_THROWS_AS(bargmann_orthogonalize(0.0, 1.0, 5), ConfigError);
  CHECK_THROWS_AS(bargmann_orthogonalize(1.0, -2.0, 5), ConfigError);
  CHECK_THROWS_AS(bargmann_orthogonalize(1.0, 1.0, 0), ConfigError);
  CHECK_THROWS_AS(bargmann_orthogonalize(1.0, 1.0, 25), ConfigError);
  CHECK_THROWS_AS(bargmann_orthogonalize(1.0, 1.0, 8, 40), ConfigError);
  CHECK_THROWS_AS(bargmann_dB(1.0, 1.0, 0), ConfigError);
}

TEST_CASE("hardy: straight strip distances match the closed form") {
  DiskChain chain(straight_bih(), 0.0, 0.0);
  HardyBasis basis = hardy_basis(chain, 0.0, 0.0, 14, 4);
  CHECK(basis.gram_dev < 1e-6);
  CHECK(basis.gram_cond < 1.0 + 1e-5);
  const double g0 = chain.data().g0_abs;
  CHECK(g0 == doctest::Approx(4.0 / kPi).epsilon(1e-10));
  for (int k = 1; k <= 4; ++k) {
    HardyMinimizer m = dH_minimized(basis, k);
    CHECK(m.value == doctest::Approx(dH_closed(g0, k)).epsilon(1e-5));
    // The distance-k minimizer reproduces the unit jet exactly.
    CMat jet = basis.D.topRows(k) * m.v;
    CHECK((jet - CMat::Identity(k, k)).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("hardy: curved bump dual route agrees with the closed form") {
  const BumpFixture& fx = bump1();
  DiskChain chain(fx.bih, fx.min.s_min, fx.min.t_min);
  HardyBasis basis = hardy_basis(chain, fx.min.s_min, fx.min.t_min, 14, 4);
  CHECK(basis.gram_dev < 2e-3);
  CHECK(basis.gram_cond < 1.05);
  const double g0 = chain.data().g0_abs;
  CHECK(g0 == doctest::Approx(1.30695635).epsilon(1e-3));
  for (int k = 1; k <= 3; ++k) {
    HardyMinimizer m = dH_minimized(basis, k);
    CHECK(m.value == doctest::Approx(dH_closed(g0, k)).epsilon(1e-3));
  }
}

TEST_CASE("hardy: taylor projection reproduces jets and is orthogonal") {
  const BumpFixture& fx = bump1();
  DiskChain chain(fx.bih, fx.min.s_min, fx.min.t_min);
  HardyBasis basis = hardy_basis(chain, fx.min.s_min, fx.min.t_min, 14, 4);
  const int k = 3;

  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  CVec u(basis.M), w(basis.M);
  for (int i = 0; i < basis.M; ++i) {
    u[i] = cplx(nd(rng), nd(rng));
    w[i] = cplx(nd(rng), nd(rng));
  }

  CVec pu = hardy_taylor_project(basis, u, k);
  CVec ju = basis.D.topRows(k) * u;
  CVec jpu = basis.D.topRows(k) * pu;
  CHECK((ju - jpu).cwiseAbs().maxCoeff() <
        1e-8 * (1.0 + ju.cwiseAbs().maxCoeff()));

  CVec ppu = hardy_taylor_project(basis, pu, k);
  CHECK((ppu - pu).norm() < 1e-10 * pu.norm());

  // Self-adjoint in the boundary inner product.
  CVec pw = hardy_taylor_project(basis, w, k);
  cplx left = (pu.adjoint() * (basis.G * w)).value();
  cplx right = (u.adjoint() * (basis.G * pw)).value();
  CHECK(std::abs(left - right) < 1e-9 * (1.0 + std::abs(left)));

  CHECK_THROWS_AS(hardy_taylor_project(basis, CVec::Zero(3), 2), ConfigError);
}

TEST_CASE("hardy: configuration guards") {
  DiskChain chain(straight_bih(), 0.0, 0.0);
  CHECK_THROWS_AS(hardy_basis(chain, 0.0, 0.0, 1, 2), ConfigError);
  CHECK_THROWS_AS(hardy_basis(chain, 0.0, 0.0, 14, 0), ConfigError);
  CHECK_THROWS_AS(hardy_basis(chain, 0.0, 0.0, 14, 4, 4000), ConfigError);
  CHECK_THROWS_AS(hardy_basis(chain, 0.0, 0.0, 14, 4, 4001, 8), ConfigError);
  HardyBasis small = hardy_basis(chain, 0.0, 0.0, 10, 4);
  CHECK_THROWS_AS(dH_minimized(small, 3), ConfigError);
  CHECK_THROWS_AS(dH_minimized(small, 5), ConfigError);
  CHECK_THROWS_AS(dH_closed(1.0, 0), ConfigError);
}

TEST_CASE("effective: synthetic quadratic weight recovers the constants") {
  const BumpFixture& fx = bump1();
  CHECK(fx.min.phi_min == doctest::Approx(-0.536941).epsilon(1e-3));
  CHECK(fx.min.t_min == doctest::Approx(0.1724).epsilon(0.02));
  CHECK(fx.min.a == doctest::Approx(0.064646).epsilon(0.02));
  CHECK(fx.min.b == doctest::Approx(1.935324).epsilon(0.01));

  EffectiveReport rep =
      lambda_eff(fx.field, fx.bih, {0.1, 0.05, 0.025}, 3, 14, true);
  REQUIRE(rep.assumption_ok);
  REQUIRE(rep.entries.size() == 3);
  CHECK(rep.gram_dev < 2e-3);
  for (int k = 0; k < 3; ++k)
    CHECK(rep.dh_min[k] == doctest::Approx(rep.dh[k]).epsilon(1e-3));

  // Scaled pencil ratios r_k -> 1 (h in {0.1, 0.05, 0.025}).
  const double rpin[3][3] = {{1.37615, 1.22070, 1.14028},
                             {3.38057, 2.12814, 1.68212},
                             {13.40774, 4.93962, 2.92062}};
  for (int i = 0; i < 3; ++i) {
    const EffectiveEntry& e = rep.entries[i];
    CHECK(e.rr_monotone);
    CHECK(e.trunc_dev < 0.5);
    REQUIRE(e.lambda_scaled.size() == 3);
    CHECK(e.lambda_scaled.minCoeff() > 0.0);
    CHECK(e.lambda_scaled[0] <= e.lambda_scaled[1] * (1.0 + 1e-12));
    CHECK(e.lambda_scaled[1] <= e.lambda_scaled[2] * (1.0 + 1e-12));
    for (int k = 0; k < 3; ++k) {
      CHECK(e.ratio[k] == doctest::Approx(rpin[k][i]).epsilon(0.02));
      if (i > 0)
        CHECK(std::abs(e.ratio[k] - 1.0) <
              std::abs(rep.entries[i - 1].ratio[k] - 1.0));
    }
  }

  // Laplace normalization of the ground Gram entry:
  // G_w(0,0) -> 2 pi h / sqrt(ab) * |b_0(z_min)|^2.
  DiskChain chain(fx.bih, fx.min.s_min, fx.min.t_min);
  const double chi0 = std::norm(chain.uv(fx.min.s_min, fx.min.t_min).chi);
  double prev_dev = std::numeric_limits<double>::infinity();
  for (const EffectiveEntry& e : rep.entries) {
    double lap = 2.0 * kPi * e.h / std::sqrt(rep.minimum.a * rep.minimum.b);
    double dev = std::abs(e.g00 / (lap * chi0) - 1.0);
    CHECK(dev < prev_dev);
    prev_dev = dev;
  }
  CHECK(prev_dev < 0.5);
}

TEST_CASE("effective: scaled bump ladder approaches the model constants") {
  const BumpFixture& fx = bump4();
  CHECK(fx.min.phi_min == doctest::Approx(-8.591054).epsilon(1e-3));
  CHECK(fx.min.a == doctest::Approx(0.064646).epsilon(0.02));
  CHECK(fx.min.b == doctest::Approx(1.935324).epsilon(0.01));

  const std::vector<double> hs{0.5, 0.4, 0.3, 0.2};
  EffectiveReport rep = lambda_eff(fx.field, fx.bih, hs, 3, 14);
  REQUIRE(rep.assumption_ok);
  REQUIRE(rep.entries.size() == 4);
  CHECK(rep.g0_abs == doctest::Approx(5.227825).epsilon(1e-3));
  CHECK(rep.gram_dev < 2e-3);

  const double dh_pins[3] = {5.731265, 29.962052, 78.318188};
  const double dh_min_pins[3] = {5.730192, 29.956614, 78.304393};
  for (int k = 0; k < 3; ++k) {
    CHECK(rep.dh[k] == doctest::Approx(dh_pins[k]).epsilon(2e-3));
    CHECK(rep.dh_min[k] == doctest::Approx(dh_min_pins[k]).epsilon(2e-3));
  }

  const double r1pin[4] = {1.05194, 1.04057, 1.03136, 1.02344};
  const double r2pin[4] = {1.24390, 1.17929, 1.13780, 1.11401};
  for (int i = 0; i < 4; ++i) {
    const EffectiveEntry& e = rep.entries[i];
    CHECK(e.rr_monotone);
    // Truncation sensitivity is largest at the wide-weight end of the
    // ladder and must settle where the asymptotics are read off.
    CHECK(e.trunc_dev < 0.25);
    CHECK(e.lambda_scaled.minCoeff() > 0.0);
    CHECK(e.ratio[0] == doctest::Approx(r1pin[i]).epsilon(0.01));
    CHECK(e.ratio[1] == doctest::Approx(r2pin[i]).epsilon(0.02));
    if (i > 0) {
      CHECK(std::abs(e.ratio[0] - 1.0) <
            std::abs(rep.entries[i - 1].ratio[0] - 1.0));
      CHECK(std::abs(e.ratio[1] - 1.0) <
            std::abs(rep.entries[i - 1].ratio[1] - 1.0));
    }
    // log lambda_k^eff consistent with the scaled eigenvalue.
    CHECK(e.lambda_log[0] ==
          doctest::Approx(std::log(e.lambda_scaled[0]) +
                          2.0 * rep.minimum.phi_min / e.h)
              .epsilon(1e-12));
  }
  CHECK(std::abs(rep.entries[3].ratio[0] - 1.0) < 0.2);
  CHECK(std::abs(rep.entries[3].ratio[1] - 1.0) < 0.2);
  CHECK(rep.entries[3].trunc_dev < 0.1);

  // The effective levels sit inside the spectral gap below the essential
  // threshold of the same h, with a margin that grows as h decreases.
  double prev_margin = -std::numeric_limits<double>::infinity();
  int prev_gap = 1;
  for (int i = 0; i < 4; ++i) {
    Threshold th = threshold_pos(hs[i], 4.0);
    GapEntry g = gap_report(rep, i, th.lambda_ess);
    CHECK(g.h == hs[i]);
    CHECK(g.margin_log > 0.0);
    CHECK(g.margin_log > prev_margin);
    CHECK(g.in_gap >= prev_gap);
    prev_margin = g.margin_log;
    prev_gap = g.in_gap;
  }
  CHECK(prev_gap >= 2);
}

TEST_CASE("effective: assumption gate rejects the straight strip") {
  static PotentialField field(straight_map(), 201, 41);
  static Biholomorphism bih(straight_map(), 201, 41);
  CHECK_THROWS_AS(lambda_eff(field, bih, {0.1}, 2, 12), AssumptionError);
}

TEST_CASE("effective: configuration guards") {
  const BumpFixture& fx = bump1();
  CHECK_THROWS_AS(lambda_eff(fx.field, fx.bih, {}, 3, 14), ConfigError);
  CHECK_THROWS_AS(lambda_eff(fx.field, fx.bih, {-0.1}, 3, 14), ConfigError);
  CHECK_THROWS_AS(lambda_eff(fx.field, fx.bih, {0.1}, 0, 14), ConfigError);
  CHECK_THROWS_AS(lambda_eff(fx.field, fx.bih, {0.1}, 7, 20), ConfigError);
  CHECK_THROWS_AS(lambda_eff(fx.field, fx.bih, {0.1}, 3, 9), ConfigError);

  EffectiveReport rep = lambda_eff(fx.field, fx.bih, {0.2}, 1, 12, true);
  CHECK_THROWS_AS(gap_report(rep, 1, 1.0), ConfigError);
  CHECK_THROWS_AS(gap_report(rep, -1, 1.0), ConfigError);
  CHECK_THROWS_AS(gap_report(rep, 0, 0.0), ConfigError);
}

TEST_CASE("effective: intertwining residual shrinks at second order") {
  const BumpFixture& fx = bump1();
  DiskChain chain(fx.bih, fx.min.s_min, fx.min.t_min);
  for (int n : {0, 1, 2}) {
    double r1 = intertwining_residual(fx.field, chain, 0.3, n, 0.08);
    double r2 = intertwining_residual(fx.field, chain, 0.3, n, 0.04);
    CAPTURE(n);
    CAPTURE(r1);
    CAPTURE(r2);
    CHECK(r1 < 0.1);
    CHECK(r1 / r2 > 3.2);
    CHECK(r1 / r2 < 5.5);
  }
  CHECK_THROWS_AS(intertwining_residual(fx.field, chain, 0.3, 0, 0.5),
                  ConfigError);
  CHECK_THROWS_AS(intertwining_residual(fx.field, chain, 0.3, 49, 0.04),
                  ConfigError);
  CHECK_THROWS_AS(intertwining_residual(fx.field, chain, -0.3, 0, 0.04),
                  ConfigError);
}
