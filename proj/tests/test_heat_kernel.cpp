#include <doctest.h>

#include <cmath>
#include <random>

#include "rotsym/errors.hpp"
#include "rotsym/heat_kernel.hpp"

using namespace rotsym;

namespace {

// Dirichlet eigenfunction expansion on [-L, L]
double series(double x, double y, double L, double t) {
  double s = 0;
  for (int k = 1; k < 4000; ++k) {
    const double a = k * kPi / (2 * L);
    s += std::sin(a * (x + L)) * std::sin(a * (y + L)) * std::exp(-a * a * t);
  }
  return s / L;
}

}  // namespace

TEST_CASE("image kernel matches the eigenfunction series") {
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> U(-4, 4), T(0.01, 16);
  ImageKernel k{4};
  for (int i = 0; i < 100; ++i) {
    const double a = U(g), b = U(g), c = U(g), d = U(g), t = T(g);
    const double o = series(a, c, 4, t) * series(b, d, 4, t);
    CHECK(std::abs(eval_dirichlet_kernel(k, a, b, c, d, t).value - o) < 1e-8);
  }
}

TEST_CASE("kernel vanishes on the boundary and is symmetric") {
  ImageKernel k{3};
  CHECK(std::abs(eval_dirichlet_kernel(k, 0.3, 0.1, 3, 1.0, 2.0).value) < 1e-14);
  const double a = eval_dirichlet_kernel(k, 0.3, -1.2, 2.0, 0.5, 0.7).value;
  const double b = eval_dirichlet_kernel(k, 2.0, 0.5, 0.3, -1.2, 0.7).value;
  CHECK(a == doctest::Approx(b).epsilon(1e-14));
}

TEST_CASE("image tail bound shrinks with the cutoff") {
  CHECK(image_tail_bound(4, 1, 2) < image_tail_bound(4, 1, 1));
  const int K = image_cutoff(4, 16, 1e-12);
  CHECK(image_tail_bound(4, 16, K) <= 1e-12);
}

TEST_CASE("mass is below one and decreasing") {
  ImageKernel k{4};
  double prev = 1;
  for (double t : {0.5, 2.0, 8.0}) {
    QuadResult m = mass_bound(k, 0.1, 0.05, t);
    CHECK(m.value < prev);
    prev = m.value;
  }
}

TEST_CASE("kernel reproduces a Dirichlet eigenfunction") {
  const double L = 4;
  ImageKernel k{L};
  auto eig = [&](double a, double b) {
    return std::sin(kPi * (a + L) / (2 * L)) * std::sin(2 * kPi * (b + L) / (2 * L));
  };
  QuadResult r = solve_via_kernel(k, eig, [](double, double, double) { return 0.0; }, 0, 0.5, 0.3, 2.0);
  CHECK(r.value == doctest::Approx(eig(0.5, 0.3) * std::exp(-5 * kPi * kPi / (4 * L * L) * 2.0)).epsilon(1e-8));
}

TEST_CASE("boundary flux admits a finite envelope constant") {
  ImageKernel k{4};
  FluxValue v = boundary_flux_bound(k, 0.1, -0.05, 1.0);
  CHECK(std::isfinite(v.C50));
  CHECK(v.flux >= 0);
  CHECK_THROWS_AS(boundary_flux_bound(k, 1.0, 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(boundary_flux_bound(k, 0.0, 0.0, 20.0), DomainError);
  FluxSweep a = flux_sweep(4, {0.5, 1, 2}), b = flux_sweep(8, {2, 4, 8});
  // the envelope is scale invariant under L -> 2L, s -> 4s
  CHECK(a.C50 == doctest::Approx(b.C50).epsilon(1e-6));
}
