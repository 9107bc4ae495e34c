#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stripdirac/quadrature.hpp"

using namespace sd;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1 exactly") {
  for (int n : {1, 2, 5, 12, 40}) {
    Quadrature q = gauss_legendre(n);
    for (int deg = 0; deg <= 2 * n - 1; ++deg) {
      double acc = 0.0;
      for (int i = 0; i < n; ++i) acc += q.w[i] * std::pow(q.x[i], deg);
      double exact = (deg % 2 == 1) ? 0.0 : 2.0 / (deg + 1);
      CHECK(acc == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("mapped rule reproduces interval moments") {
  Quadrature q = gauss_legendre(8, 0.5, 2.5);
  double acc = 0.0;
  for (int i = 0; i < q.x.size(); ++i) acc += q.w[i] * q.x[i] * q.x[i];
  CHECK(acc == doctest::Approx((std::pow(2.5, 3) - std::pow(0.5, 3)) / 3.0));
}

TEST_CASE("composite rule on graded edges integrates a sharp Gaussian") {
  auto edges = graded_edges(-10.0, 10.0, 1.0, 2.0, 0.05, 0.7);
  REQUIRE(edges.front() == doctest::Approx(-10.0));
  REQUIRE(edges.back() == doctest::Approx(10.0));
  for (std::size_t i = 1; i < edges.size(); ++i) CHECK(edges[i] > edges[i - 1]);
  Quadrature q = composite_gauss(edges, 12);
  double acc = 0.0;
  for (int i = 0; i < q.x.size(); ++i)
    acc += q.w[i] * std::exp(-40.0 * (q.x[i] - 1.0) * (q.x[i] - 1.0));
  CHECK(acc == doctest::Approx(std::sqrt(M_PI / 40.0)).epsilon(1e-12));
}

TEST_CASE("Simpson weights integrate cubics exactly") {
  int n = 21;
  double dx = 0.35;
  Vec w = simpson_weights(n, dx);
  double acc = 0.0, b = (n - 1) * dx;
  for (int i = 0; i < n; ++i) {
    double x = i * dx;
    acc += w[i] * (x * x * x - 2.0 * x + 1.0);
  }
  double exact = b * b * b * b / 4.0 - b * b + b;
  CHECK(acc == doctest::Approx(exact).epsilon(1e-13));
  CHECK_THROWS_AS(simpson_weights(4, 0.1), ConfigError);
}
