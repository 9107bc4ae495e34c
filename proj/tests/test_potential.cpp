#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stripdirac/potential.hpp"

using namespace sd;

namespace {

PotentialField straight_field() {
  CurveProfile p{0.0, 1.0, 2.0, 1.0};
  Curve c(p, 5.0);
  return PotentialField(TubularMap(c, 1.0), 201, 41);
}

PotentialField bump_field(int ns = 301, int nt = 41) {
  CurveProfile p{0.9, 1.6, 3.5, 1.2};
  Curve c(p, 9.5);
  return PotentialField(TubularMap(c, 1.0), ns, nt);
}

}  // namespace

TEST_CASE("straight strip reproduces the parabolic profile exactly") {
  PotentialField f = straight_field();
  for (double t : {-0.99, -0.5, 0.0, 0.31, 0.86}) {
    for (double s : {-4.0, 0.0, 2.5}) {
      CHECK(f.eval(s, t) ==
            doctest::Approx(phi0(t, 1.0)).scale(1.0).epsilon(1e-11));
    }
  }
  auto rep = locate_minimum(f);
  CHECK(rep.phi_min == doctest::Approx(-0.5).epsilon(1e-10));
  CHECK(std::abs(rep.t_min) < 1e-6);
  CHECK(rep.b == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(std::abs(rep.a) < 1e-6);
  CHECK_FALSE(rep.nondegenerate);
  CHECK_FALSE(rep.unique_min);
  CHECK_FALSE(rep.strictly_below_straight);
}

TEST_CASE("curved strip: minimum drops below the straight floor") {
  PotentialField f = bump_field();
  auto rep = locate_minimum(f);
  CHECK(rep.strictly_below_straight);
  CHECK(rep.unique_min);
  CHECK(rep.nondegenerate);
  CHECK(rep.interior);
  CHECK(rep.d0 > 0.0);
  // Unit magnetic field: the Hessian eigenvalues a/2, b/2 sum to 1/2 so
  // a + b = 2 (trace of the physical Hessian is the Laplacian).
  CHECK(rep.a + rep.b == doctest::Approx(2.0).epsilon(5e-4));
  CHECK(rep.a > 0.0);
  CHECK(rep.a < rep.b);
  // Symmetric geometry: minimum sits on the symmetry axis, pushed to the
  // outer side of the bend.
  CHECK(std::abs(rep.s_min) < 1e-6);
  CHECK(rep.t_min > 0.1);
}

TEST_CASE("gradient at the located minimum vanishes") {
  PotentialField f = bump_field();
  auto rep = locate_minimum(f);
  CHECK(std::abs(f.eval(rep.s_min, rep.t_min, 1, 0)) < 1e-9);
  CHECK(std::abs(f.eval(rep.s_min, rep.t_min, 0, 1)) < 1e-9);
}

TEST_CASE("minimum converges at second order under grid refinement") {
  auto r1 = locate_minimum(bump_field(301, 41));
  auto r2 = locate_minimum(bump_field(601, 81));
  auto r3 = locate_minimum(bump_field(1201, 161));
  double d12 = std::abs(r1.phi_min - r2.phi_min);
  double d23 = std::abs(r2.phi_min - r3.phi_min);
  CHECK(d12 < 3e-4);
  CHECK(d23 < d12);
  // Halving the mesh should shrink the drift by about 2^2.
  CHECK(d12 / d23 > 2.5);
  CHECK(d12 / d23 < 6.5);
  CHECK(std::abs(r2.t_min - r3.t_min) < 2e-4);
  CHECK(std::abs(r2.a - r3.a) < 2e-3);
}

TEST_CASE("boundary normal derivative is outward nonnegative") {
  PotentialField f = bump_field();
  auto [top, bot] = f.boundary_normal_derivative();
  for (int i = 0; i < top.size(); ++i) {
    CHECK(top[i] > 0.0);
    CHECK(bot[i] > 0.0);
  }
  // Far from the bend both edges approach the straight value delta = 1.
  CHECK(top[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(bot[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("vector potential is the perpendicular gradient") {
  PotentialField f = bump_field();
  Eigen::Vector2d g = f.grad_xy(0.5, 0.2);
  Eigen::Vector2d A = f.vector_potential(0.5, 0.2);
  CHECK(A[0] == doctest::Approx(-g[1]).scale(1.0));
  CHECK(A[1] == doctest::Approx(g[0]).scale(1.0));
  CHECK(g.dot(A) == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
}
