#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stripdirac/fiber.hpp"

using namespace sd;
using namespace sd::fiber;

namespace {

// Reference ground eigenvalues mu1^+(xi, h) at delta = 1, frozen from a
// 40-digit special-function solve of the transcendental boundary system.
struct Ref {
  double h, xi, mu;
};
const Ref kPlusRefs[] = {
    {0.2, 0.0, 0.003399064938}, {0.2, 0.5, 0.07172956835},
    {0.2, 1.0, 0.371730716},    {0.2, 1.5, 0.7943934519},
    {0.2, 2.0, 1.254364258},    {0.1, 0.0, 1.619980825e-5},
    {0.1, 0.5, 0.01459060439},  {0.1, 1.0, 0.2628533081},
    {0.1, 1.5, 0.694575848},    {0.1, 2.0, 1.164640346},
    {0.05, 0.0, 5.200563738e-10}, {0.05, 0.5, 0.0008498837079},
    {0.05, 1.0, 0.1858653566},  {0.05, 1.5, 0.6271821291},
    {0.05, 2.0, 1.1057176},
};

const Ref kMinusRefs[] = {
    {0.05, 0.0, 0.316227755780}, {0.05, 0.5, 0.312065763852},
    {0.05, 0.8, 0.304277273455}, {0.05, 1.0, 0.393518867347},
    {0.05, 1.5, 0.784265271867},
};

}  // namespace

TEST_CASE("nu1: symmetry, monotonicity, closed-form value") {
  double h = 0.05, d = 1.0;
  CHECK(nu1(0.7, h, d) == doctest::Approx(nu1(-0.7, h, d)).epsilon(1e-14));
  double prev = nu1(0.0, h, d);
  for (double xi = 0.1; xi < 3.0; xi += 0.1) {
    double cur = nu1(xi, h, d);
    CHECK(cur > prev);
    prev = cur;
  }
  // Independent expression at xi = 0.
  double expect = 2.0 * std::sqrt(h / M_PI) * std::exp(-1.0 / h) /
                  std::erf(1.0 / std::sqrt(h));
  CHECK(nu1(0.0, h, d) == doctest::Approx(expect).epsilon(1e-12));
  // The far-tail branch joins the direct branch smoothly.
  double hh = 0.01, xa = 1.0 + 24.9 * std::sqrt(hh), xb = 1.0 + 25.1 * std::sqrt(hh);
  double va = nu1(xa, hh, d), vb = nu1(xb, hh, d);
  CHECK(vb > va);
  CHECK(vb / va < 1.2);
}

TEST_CASE("ground form ell1: zero at origin, concave, negative past root") {
  double h = 0.2, d = 1.0;
  for (int sign : {+1, -1}) {
    for (double xi : {0.0, 0.7}) {
      CHECK(std::abs(ell1(xi, h, d, 0.0, sign)) < 1e-9);
      double mu = mu1_via_root(xi, h, d, sign);
      CHECK(ell1(xi, h, d, 3.0 * mu + 1.0, sign) < 0.0);
      // Concavity of lambda -> ell1 on 5 samples.
      double l0 = ell1(xi, h, d, 0.2 * mu, sign),
             l1 = ell1(xi, h, d, 0.6 * mu, sign),
             l2 = ell1(xi, h, d, 1.0 * mu, sign),
             l3 = ell1(xi, h, d, 1.4 * mu, sign),
             l4 = ell1(xi, h, d, 1.8 * mu, sign);
      CHECK(l1 >= 0.5 * (l0 + l2) - 1e-12);
      CHECK(l2 >= 0.5 * (l1 + l3) - 1e-12);
      CHECK(l3 >= 0.5 * (l2 + l4) - 1e-12);
    }
  }
}

TEST_CASE("inequality |ell1| >= lambda |mu1 - lambda| at sampled lambda") {
  double h = 0.1, d = 1.0, xi = 0.4;
  for (int sign : {+1, -1}) {
    double mu = mu1_via_root(xi, h, d, sign);
    for (double f : {0.3, 0.8, 1.3, 2.0}) {
      double lam = f * mu;
      double l = ell1(xi, h, d, lam, sign);
      CHECK(std::abs(l) >= lam * std::abs(mu - lam) - 1e-10);
    }
  }
}

TEST_CASE("mu1_via_root reproduces the frozen reference lattice (+)") {
  for (const Ref& r : kPlusRefs) {
    double got = mu1_via_root(r.xi, r.h, 1.0, +1);
    CHECK(got == doctest::Approx(r.mu).epsilon(1e-7));
    CHECK(got <= nu1(r.xi, r.h, 1.0) * (1.0 + 1e-12));
  }
}

TEST_CASE("mu1_via_root reproduces the frozen reference lattice (-)") {
  for (const Ref& r : kMinusRefs) {
    double got = mu1_via_root(r.xi, r.h, 1.0, -1);
    CHECK(got == doctest::Approx(r.mu).epsilon(1e-7));
  }
}

TEST_CASE("coercivity at large momentum") {
  for (double h : {0.2, 0.1}) {
    for (double off : {1.0, 2.0}) {
      double xi = 1.0 + off;
      double bound = off - h / off;
      CHECK(mu1_via_root(xi, h, 1.0, +1) >= bound);
    }
  }
}

TEST_CASE("rho minimization agrees with the root procedure") {
  for (const Ref& r : {kPlusRefs[0], kPlusRefs[1], kPlusRefs[5],
                       kPlusRefs[10]}) {
    double root = mu1_via_root(r.xi, r.h, 1.0, +1);
    double rho = mu1_via_rho(r.xi, r.h, 1.0, +1);
    CHECK(std::abs(rho / root - 1.0) < 1e-5);
  }
  double root = mu1_via_root(0.5, 0.05, 1.0, -1);
  double rho = mu1_via_rho(0.5, 0.05, 1.0, -1);
  CHECK(std::abs(rho / root - 1.0) < 1e-5);
  // Seed independence of the converged minimum.
  double rho2 = mu1_via_rho(0.5, 0.05, 1.0, -1, 64, 240, 5, 1);
  CHECK(std::abs(rho2 / rho - 1.0) < 1e-9);
}

TEST_CASE("Gaussian trial saturates rho+ at exactly nu1") {
  // In the gauged orthonormal basis the first vector spans the Gaussian, so
  // its rho value is (h B_00 + sqrt((h B_00)^2 + 4 K_00)) / 2 with K_00 = 0.
  double h = 0.1, d = 1.0, xi = 0.3;
  PencilForms f = forms_gauged_plus(xi, h, d, 48, 200);
  double kq = f.K(0, 0), bq = h * f.B(0, 0);
  CHECK(std::abs(kq) < 1e-14);
  double rho = (bq + std::sqrt(bq * bq + 4.0 * kq)) / 2.0;
  CHECK(rho == doctest::Approx(nu1(xi, h, d)).epsilon(1e-10));
}

TEST_CASE("dirac_fiber_eigs: invertibility, ordering, symmetry, agreement") {
  FiberSpec spec;
  spec.delta = 1.0;
  for (double h : {0.2, 0.05}) {
    spec.h = h;
    for (double xi : {0.0, 0.5, 1.0}) {
      spec.xi = xi;
      auto [pos, neg] = dirac_fiber_eigs(spec, 3);
      for (int k = 0; k < 3; ++k) {
        CHECK(pos[k] > 1e-12);
        CHECK(neg[k] > 1e-12);
        if (k > 0) {
          CHECK(pos[k] >= pos[k - 1]);
          CHECK(neg[k] >= neg[k - 1]);
        }
      }
      double root_p = mu1_via_root(xi, h, 1.0, +1);
      double root_m = mu1_via_root(xi, h, 1.0, -1);
      CHECK(std::abs(pos[0] / root_p - 1.0) < 1e-6);
      CHECK(std::abs(neg[0] / root_m - 1.0) < 1e-6);

      spec.xi = -xi;
      auto [pos2, neg2] = dirac_fiber_eigs(spec, 3);
      spec.xi = xi;
      for (int k = 0; k < 3; ++k) {
        CHECK(std::abs(pos2[k] - pos[k]) <=
              1e-10 * (1.0 + std::abs(pos[k])));
        CHECK(std::abs(neg2[k] - neg[k]) <=
              1e-10 * (1.0 + std::abs(neg[k])));
      }
    }
  }
}

TEST_CASE("second-order FD variant converges to the spectral value") {
  FiberSpec spec;
  spec.h = 0.5;
  spec.delta = 1.0;
  spec.xi = 0.0;
  double ref = mu1_via_root(0.0, 0.5, 1.0, +1);
  spec.disc = Discretization::kSecondOrderFD;
  spec.n = 100;
  double e100 = std::abs(dirac_fiber_eigs(spec, 1).first[0] - ref);
  spec.n = 200;
  double e200 = std::abs(dirac_fiber_eigs(spec, 1).first[0] - ref);
  CHECK(e200 < 1e-4);
  CHECK(e100 / e200 > 2.5);  // about 4 for a second-order scheme
}

TEST_CASE("collocation cross-check matches the variational spectra") {
  FiberSpec spec;
  spec.delta = 1.0;
  spec.h = 0.2;
  spec.xi = 0.5;
  auto [pos, neg] = dirac_fiber_eigs(spec, 2);
  auto [cp, cn] = dirac_eigs_collocation(spec, 2);
  for (int k = 0; k < 2; ++k) {
    CHECK(std::abs(cp[k] / pos[k] - 1.0) < 1e-6);
    CHECK(std::abs(cn[k] / neg[k] - 1.0) < 1e-6);
  }
}

TEST_CASE("dispersion sweep: evenness and branch structure") {
  DispersionCurve dc = dispersion_sweep(0.2, 1.0, 2, 21, 0.0, 48, 200);
  int n = static_cast<int>(dc.xi.size());
  for (int i = 0; i < n; ++i) {
    int j = n - 1 - i;  // mirrored index
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(dc.pos(i, k) - dc.pos(j, k)) <=
            1e-9 * (1.0 + dc.pos(i, k)));
      CHECK(std::abs(dc.neg(i, k) - dc.neg(j, k)) <=
            1e-9 * (1.0 + dc.neg(i, k)));
    }
  }
  // Ground + branch dips at xi = 0 (center index).
  int imin = 0;
  dc.pos.col(0).minCoeff(&imin);
  CHECK(imin == (n - 1) / 2);
  // Ground - branch minimum away from the center, near delta - sqrt(h) a0.
  int jmin = 0;
  dc.neg.col(0).minCoeff(&jmin);
  double xm = std::abs(dc.xi[jmin]);
  double predict = 1.0 - std::sqrt(0.2) * 1.3133;
  CHECK(std::abs(xm - predict) < 3.0 * std::sqrt(0.2));
}

TEST_CASE("essential-spectrum thresholds against the reference ladder") {
  Threshold tp3 = threshold_pos(0.3, 1.0);
  CHECK(tp3.lambda_ess / nu1(0.0, 0.3, 1.0) ==
        doctest::Approx(0.9883304153).epsilon(1e-6));
  CHECK(std::abs(tp3.xi_star) < 1e-6);
  Threshold tp2 = threshold_pos(0.2, 1.0);
  CHECK(tp2.lambda_ess / nu1(0.0, 0.2, 1.0) ==
        doctest::Approx(0.9981169616).epsilon(1e-6));
  CHECK(tp2.lambda_ess <= nu1(0.0, 0.2, 1.0));

  Threshold tm = threshold_neg(0.05, 1.0);
  CHECK(tm.xi_star == doctest::Approx(0.70634747).epsilon(1e-4));
  CHECK(std::abs(tm.lambda_ess / std::sqrt(0.05) - 1.313254056) < 1e-3);
}

TEST_CASE("half-line constant a0") {
  HalflineResult hr = halfline_a0();
  CHECK(hr.a0 > 0.0);
  CHECK(hr.a0 < std::sqrt(2.0));
  CHECK(hr.a0 == doctest::Approx(1.313254056).epsilon(1e-6));
  CHECK(std::abs(hr.xi_hat + hr.a0) < 1e-4);
  CHECK(hr.tail_mass < 1e-10);
}

TEST_CASE("whole-line Landau value") {
  CHECK(std::abs(landau_check(0.0, 0.0)) < 1e-8);
  CHECK(std::abs(landau_check(1.0, 2.0)) < 1e-8);
  CHECK(std::abs(landau_check(std::sqrt(2.0), 0.0)) < 1e-8);
}

TEST_CASE("kernel projector residual: window gate and decay") {
  auto r2 = kernel_projector_residual(0.0, 0.2, 1.0);
  CHECK(r2.in_window);
  CHECK(r2.mu1 <= r2.gate);
  CHECK(r2.scaled == doctest::Approx(4.9e-3).epsilon(0.1));
  auto r1 = kernel_projector_residual(0.0, 0.1, 1.0);
  CHECK(r1.scaled < r2.scaled);
  CHECK_THROWS_AS(kernel_projector_residual(0.9, 0.2, 1.0), AssumptionError);
}

TEST_CASE("curvature wells bind; straight spine does not") {
  CurveProfile flat{0.0, 1.0, 2.0, 0.8};
  BoundState b0 = curvature_bound_state(flat, 0.3, 30.0, 2001);
  CHECK_FALSE(b0.negative);
  CHECK(b0.lambda >= 0.0);

  CurveProfile bump{1.0, 1.0, 2.0, 0.8};
  BoundState b1 = curvature_bound_state(bump, 0.3, 40.0, 3001);
  CHECK(b1.negative);
  CHECK(b1.lambda < 0.0);

  // Thin-strip limit: the two well candidates differ at first order in
  // delta, so their spread shrinks linearly and both tend to one limit.
  BoundState ba = curvature_bound_state(bump, 0.1, 40.0, 3001);
  BoundState bb = curvature_bound_state(bump, 0.01, 40.0, 3001);
  double spread_a = std::abs(ba.lambda_minus - ba.lambda_plus);
  double spread_b = std::abs(bb.lambda_minus - bb.lambda_plus);
  CHECK(spread_b < 0.3 * spread_a);
  CHECK(spread_b < 0.1 * std::abs(bb.lambda));
  CHECK(std::abs(ba.lambda - bb.lambda) < 0.5 * std::abs(bb.lambda));
}

TEST_CASE("configuration guards") {
  FiberSpec bad;
  bad.h = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = FiberSpec{};
  bad.n = 8;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  CHECK_THROWS_AS(dispersion_sweep(0.2, 1.0, 0, 21), ConfigError);
}
