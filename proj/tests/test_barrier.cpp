#include <doctest.h>

#include <cmath>

#include "rotsym/barrier.hpp"
#include "rotsym/errors.hpp"
#include "rotsym/fields.hpp"

using namespace rotsym;

TEST_CASE("barrier parameters follow the scaling in j") {
  BarrierParams p = barrier_params(4, 200, 10, 0.25);
  CHECK(p.D == doctest::Approx(40));
  CHECK(p.W == doctest::Approx(1600));
  CHECK(p.T == doctest::Approx(1600));
  CHECK(p.lambda == doctest::Approx(0.0625 / 160));
  CHECK(p.mu == doctest::Approx(0.25 / std::sqrt(40.0)));
  CHECK_THROWS_AS(barrier_params(4, 1, 10, 1.5), DomainError);
}

TEST_CASE("phi derivatives match finite differences") {
  BarrierParams p = barrier_params(4, 300, 10, 0.25);
  for (double s : {-30.0, -1.0, 0.0, 0.4, 700.0}) {
    const double h = 1e-4;
    CHECK(barrier_phi(p, s, 1) ==
          doctest::Approx((barrier_phi(p, s + h) - barrier_phi(p, s - h)) / (2 * h)).epsilon(1e-6));
    CHECK(barrier_phi(p, s, 2) ==
          doctest::Approx((barrier_phi(p, s + h, 1) - barrier_phi(p, s - h, 1)) / (2 * h)).epsilon(1e-6));
  }
  // log cosh stays finite far out
  CHECK(std::isfinite(barrier_phi(p, 1e6)));
}

TEST_CASE("phi conditions switch on at the scanned threshold") {
  const double c = 0.24;
  PhiThresholds t = phi_thresholds(4, 10, c, 3000);
  REQUIRE(t.j1 > 1);
  PhiReport at = phi_report(barrier_params(4, t.j1, 10, c));
  PhiReport before = phi_report(barrier_params(4, t.j1 - 1, 10, c));
  for (bool ok : at.ok) CHECK(ok);
  CHECK(!(before.ok[2] && before.ok[3]));
}

TEST_CASE("coefficient reduces to lambda without barrier terms") {
  BowlProfile prof = solve_bowl_profile(3, 60, 1e-10);
  BarrierParams p = barrier_params(4, 150, 10, 0.25);
  p.mu = 0;
  p.phi_scale = 0;
  RegionSpec r = bowl_region(p, prof, {8, 2, 4, 3});
  CHECK(barrier_coefficient(r).max == doctest::Approx(p.lambda).epsilon(1e-14));
}

TEST_CASE("coefficient is invariant under rotations") {
  BowlProfile prof = solve_bowl_profile(3, 200, 1e-10);
  BarrierParams p = barrier_params(4, 400, 10, 0.24);
  RegionSpec r = bowl_region(p, prof, {8, 2, 6, 3});
  Mat G = Mat::Zero(5, 5);
  G(0, 4) = -0.4;
  G(4, 0) = 0.4;
  G(1, 2) = 0.3;
  G(2, 1) = -0.3;
  RegionSpec m = transform(r, antisym_exp(G), Vec::Zero(5));
  CHECK(barrier_coefficient(m).max == doctest::Approx(barrier_coefficient(r).max).epsilon(1e-12));
}

TEST_CASE("region validity requires H above 2 mu") {
  BowlProfile prof = solve_bowl_profile(3, 200, 1e-10);
  BarrierParams p = barrier_params(4, 300, 10, 0.5);
  p.mu = 0.6;
  CHECK_THROWS_AS(barrier_coefficient(bowl_region(p, prof, {8, 2, 4, 3})), RegionValidityError);
}

TEST_CASE("maximum principle holds for the mean curvature field") {
  const double c = measure_c_n(4, 1e4);
  CHECK(c > 0.1);
  CHECK(c < 0.5);
  PhiThresholds t = phi_thresholds(4, 10, c);
  BarrierParams p = barrier_params(4, t.j1, 10, c);
  BowlProfile prof = solve_bowl_profile(3, std::sqrt(4.0 * p.D) * 1.2 + 10, 1e-10);
  RegionSpec r = bowl_region(p, prof, {12, 2, 8, 5});
  CHECK(barrier_coefficient(r).max < 0);
  MaxPrincipleReport m = max_principle_check(r, mean_curvature_jacobi());
  CHECK(m.pass);
  CHECK(m.interior <= m.boundary());
}

TEST_CASE("step-3 identity and slab threshold") {
  for (int j = 0; j <= 4000; j += 7) {
    const double lam = std::pow(2.0, -j / 50.0), c = std::pow(2.0, -j / 100.0);
    CHECK(lam - 2 * c * c < 0);
  }
  // independent scan in log2 form
  int last = 0;
  for (int j = 1; j <= 4000; ++j)
    if (-std::pow(2.0, j / 50.0) / std::log(2.0) + j / 50.0 + j / 100.0 + j > 0) last = j;
  CHECK(step3_slab_threshold(4000) == last + 1);
}

TEST_CASE("step-3 barrier on Bowl") {
  BowlProfile prof = solve_bowl_profile(4, 400, 1e-10);
  Step3Report r = translator_step3_barrier(700, 10, prof, 1.0, {16, 2, 0, 5});
  CHECK(r.identity < 0);
  CHECK(r.coefficient_max < 0);
  CHECK(r.sup_all <= r.bound);
  CHECK_THROWS_AS(translator_step3_barrier(100, 10, prof, 1.0, {16, 2, 0, 5}), RegionValidityError);
}
