// fiber_probe: quick numeric cross-check of one transverse fiber problem.
//
// Prints the first dispersion value mu1(xi, h) computed by the three
// independent routes the library exposes (scalar root bracketing on the
// quadratic pencil, Rayleigh-quotient minimization, and direct eigenvalues
// of the full 2x2 first-order system), plus the closed-form comparison
// value nu1 for the decoupled half problem at xi = 0.  Intended for manual
// convergence studies (vary --n / --nq) and for triaging disagreements
// between routes; not installed and not part of the test suite.

#include <chrono>
#include <cstdio>
#include <exception>

#include <CLI11.hpp>

#include "stripdirac/fiber.hpp"

int main(int argc, char** argv) {
  CLI::App app{"probe one fiber problem: mu1 via three routes"};
  app.set_help_flag("--help", "print this help message and exit");
  double xi = 0.0, h = 0.1, delta = 1.0;
  int sign = +1, n = 64, nq = 240, count = 4;
  app.add_option("--xi", xi, "momentum offset (default 0)");
  app.add_option("--h", h, "semiclassical parameter (default 0.1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--delta", delta, "strip half-width (default 1)")
      ->check(CLI::PositiveNumber);
  app.add_option("--sign", sign, "branch sign +1 or -1 (default +1)")
      ->check(CLI::Range(-1, 1));
  app.add_option("--n", n, "Galerkin basis size (default 64)")
      ->check(CLI::Range(8, 512));
  app.add_option("--nq", nq, "quadrature nodes (default 240)")
      ->check(CLI::Range(16, 4096));
  app.add_option("--count", count, "eigenvalues to list (default 4)")
      ->check(CLI::Range(1, 32));
  CLI11_PARSE(app, argc, argv);
  if (sign == 0) {
    std::fprintf(stderr, "fiber_probe: --sign must be +1 or -1\n");
    return 3;
  }

  try {
    using clock = std::chrono::steady_clock;

    const auto t0 = clock::now();
    const double via_root = sd::fiber::mu1_via_root(xi, h, delta, sign, n, nq);
    const auto t1 = clock::now();
    const double via_rho = sd::fiber::mu1_via_rho(xi, h, delta, sign, n, nq);
    const auto t2 = clock::now();

    sd::fiber::FiberSpec spec;
    spec.h = h;
    spec.delta = delta;
    spec.xi = xi;
    spec.n = n;
    spec.nq = nq;
    const auto [pos, neg] = sd::fiber::dirac_fiber_eigs(spec, count);
    const auto t3 = clock::now();

    const auto ms = [](auto a, auto b) {
      return std::chrono::duration<double, std::milli>(b - a).count();
    };

    std::printf("xi = %.6g  h = %.6g  delta = %.6g  sign = %+d  n = %d  nq = %d\n",
                xi, h, delta, sign, n, nq);
    std::printf("mu1_via_root      = %.15e   (%7.1f ms)\n", via_root, ms(t0, t1));
    std::printf("mu1_via_rho       = %.15e   (%7.1f ms)\n", via_rho, ms(t1, t2));
    const double direct = sign > 0 ? pos[0] : neg[0];
    std::printf("dirac_fiber_eigs  = %.15e   (%7.1f ms, both signs)\n", direct,
                ms(t2, t3));
    const double scale = std::max({std::abs(via_root), std::abs(via_rho), 1e-300});
    std::printf("spread root/rho   = %.3e (relative)\n",
                std::abs(via_root - via_rho) / scale);
    std::printf("spread root/eigs  = %.3e (relative)\n",
                std::abs(via_root - direct) / scale);
    if (xi == 0.0 && sign > 0) {
      const double nu = sd::fiber::nu1(xi, h, delta);
      std::printf("nu1 closed form   = %.15e  rel dev %.3e\n", nu,
                  std::abs(via_root - nu) / std::max(nu, 1e-300));
    }
    std::printf("first %d eigenvalues, positive branch:\n ", count);
    for (int i = 0; i < count && i < static_cast<int>(pos.size()); ++i)
      std::printf(" %.12e", pos[i]);
    std::printf("\nfirst %d eigenvalues, negative branch:\n ", count);
    for (int i = 0; i < count && i < static_cast<int>(neg.size()); ++i)
      std::printf(" %.12e", neg[i]);
    std::printf("\n");
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "fiber_probe: %s\n", e.what());
    return 2;
  }
}
