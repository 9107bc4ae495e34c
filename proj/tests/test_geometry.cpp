#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stripdirac/geometry.hpp"

using namespace sd;

TEST_CASE("straight spine reduces to the identity strip") {
  CurveProfile p{0.0, 1.0, 2.0, 1.0};
  Curve c(p, 6.0);
  for (double s : {-5.5, -1.0, 0.0, 0.3, 4.2}) {
    CHECK(c.theta(s) == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
    CHECK(c.gamma(s)[0] == doctest::Approx(s).epsilon(1e-12));
    CHECK(c.gamma(s)[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
  }
}

TEST_CASE("tangent angle matches the closed form inside the pure Gaussian zone") {
  CurveProfile p{0.9, 1.6, 3.5, 1.2};
  Curve c(p, 9.5);
  // Where the cutoff is identically 1, theta(s) = amp*w*sqrt(pi)/2*erf(s/w).
  for (double s : {-2.2, -0.7, 0.0, 0.5, 1.9, 2.3}) {
    double exact = 0.9 * 1.6 * std::sqrt(M_PI) / 2.0 * std::erf(s / 1.6);
    CHECK(c.theta(s) == doctest::Approx(exact).scale(1.0).epsilon(1e-10));
  }
}

TEST_CASE("curvature profile: support, smooth cutoff, derivative") {
  CurveProfile p{0.9, 1.6, 3.5, 1.2};
  p.validate();
  CHECK(p.kappa(0.0) == doctest::Approx(0.9));
  CHECK(p.kappa(3.5) == 0.0);
  CHECK(p.kappa(-4.0) == 0.0);
  CHECK(p.kappa(2.0) > 0.0);
  // kappa' against a central difference.
  for (double s : {-3.2, -1.0, 0.4, 2.5, 3.1}) {
    double h = 1e-6;
    double fd = (p.kappa(s + h) - p.kappa(s - h)) / (2.0 * h);
    CHECK(p.kappa_prime(s) == doctest::Approx(fd).scale(1.0).epsilon(5e-6));
  }
  CurveProfile bad{0.5, 1.0, 0.5, 1.0};  // L0 < ramp
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("frame is orthonormal and gamma'' = kappa * normal") {
  CurveProfile p{0.9, 1.6, 3.5, 1.2};
  Curve c(p, 9.5);
  double h = 1e-5;
  for (double s : {-6.0, -2.0, 0.0, 1.3, 3.0, 8.0}) {
    Eigen::Vector2d tau = c.tangent(s), nor = c.normal(s);
    CHECK(tau.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(tau.dot(nor) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    Eigen::Vector2d fd_tan = (c.gamma(s + h) - c.gamma(s - h)) / (2.0 * h);
    CHECK((fd_tan - tau).norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-8));
    Eigen::Vector2d fd_dd =
        (c.gamma(s + h) - 2.0 * c.gamma(s) + c.gamma(s - h)) / (h * h);
    CHECK((fd_dd - c.kappa(s) * nor).norm() ==
          doctest::Approx(0.0).scale(1.0).epsilon(1e-4));
  }
}

TEST_CASE("straight tails continue affinely beyond the table") {
  CurveProfile p{0.9, 1.6, 3.5, 1.2};
  Curve c(p, 9.5);
  Eigen::Vector2d g1 = c.gamma(9.5), g2 = c.gamma(12.0);
  Eigen::Vector2d expect = g1 + 2.5 * c.tangent(9.5);
  CHECK((g2 - expect).norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("tubular map guards the diffeomorphism condition") {
  CurveProfile p{0.9, 1.6, 3.5, 1.2};
  Curve c(p, 9.5);
  TubularMap ok(c, 1.0);
  CHECK(ok.m(0.0, 0.5) == doctest::Approx(1.0 - 0.5 * 0.9));
  CHECK_THROWS_AS(TubularMap(c, 1.2), AssumptionError);  // 1.2*0.9 > 1

  Eigen::Vector2d xy = ok.to_xy(0.0, 0.25);
  Eigen::Vector2d expect = c.gamma(0.0) + 0.25 * c.normal(0.0);
  CHECK((xy - expect).norm() == doctest::Approx(0.0).scale(1.0).epsilon(1e-13));
}
