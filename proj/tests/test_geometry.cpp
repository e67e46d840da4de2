#include <doctest.h>

#include <cmath>

#include "rotsym/errors.hpp"
#include "rotsym/geometry.hpp"

using namespace rotsym;

TEST_CASE("bowl profile satisfies the ODE and the profile inequalities") {
  for (int n : {3, 4, 5}) {
    BowlProfile p = solve_bowl_profile(n, 50, 1e-10);
    CHECK(bowl_ode_residual(p, true) <= 1e-10);
    for (std::size_t i = 0; i < p.r.size(); ++i) {
      const double r = p.r[i];
      CHECK(p.dphi[i] >= r / n);
      CHECK(p.phi[i] >= r * r / (2.0 * n));
      if (r >= 0.1) CHECK(1 / std::sqrt(1 + p.dphi[i] * p.dphi[i]) < n / r);
    }
  }
}

TEST_CASE("bowl profile matches its finite-difference second derivative") {
  const int n = 4;
  BowlProfile p = solve_bowl_profile(n, 20, 1e-10);
  // phi'' from differencing the interpolated phi', checked against the ODE
  for (double r : {0.5, 2.0, 7.0, 15.0}) {
    const double h = 1e-4;
    const double dd = (p.at(r + h).dphi - p.at(r - h).dphi) / (2 * h);
    const double dp = p.at(r).dphi;
    CHECK(std::abs(dd / (1 + dp * dp) + (n - 1) * dp / r - 1) < 1e-6);
  }
}

TEST_CASE("bowl tip follows the small-r series") {
  BowlProfile p = solve_bowl_profile(3, 5, 1e-10);
  const double r = 0.01;
  CHECK(p.at(r).phi == doctest::Approx(r * r / 6).epsilon(1e-4));
}

TEST_CASE("bowl profile rejects bad input") {
  CHECK_THROWS_AS(solve_bowl_profile(1, 10, 1e-10), DomainError);
  CHECK_THROWS_AS(solve_bowl_profile(3, -1, 1e-10), DomainError);
}

TEST_CASE("cylinder samples have closed-form radius and curvature") {
  for (int n : {3, 4, 5}) {
    ModelTag tag;
    tag.kind = ModelKind::Cylinder;
    tag.n = n;
    GridSpec g;
    g.sphere_res = 3;
    g.z_res = 3;
    const double t = -2.5;
    SurfaceSampleSet s = sample_model(tag, g, t);
    const double rho = std::sqrt(-2.0 * (n - 2) * t);
    CHECK(cylinder_radius(n, t) == doctest::Approx(rho));
    for (const auto& x : s.samples) {
      CHECK(x.x.head(n - 1).norm() == doctest::Approx(rho));
      CHECK(x.H == doctest::Approx((n - 2) / rho));
      CHECK(x.A2 == doctest::Approx((n - 2) / (rho * rho)));
      CHECK(x.nu.norm() == doctest::Approx(1));
    }
  }
}

TEST_CASE("radial graph of constant radius reproduces the cylinder") {
  const int n = 4;
  const double rho = cylinder_radius(n, -1);
  RadiusFn r = [&](const Vec&, double, double) { return rho; };
  Vec th = Vec::Zero(n - 1);
  th << 0.6, 0.0, 0.8;
  SurfaceSample s = radial_graph_sample(n, r, th, 0.3, -0.2);
  CHECK(s.H == doctest::Approx(cylinder_H(n, -1)).epsilon(1e-6));
  CHECK((s.nu.head(n - 1) + th).norm() < 1e-6);
}

TEST_CASE("bowl samples are translators") {
  ModelTag tag;
  tag.kind = ModelKind::Bowl;
  tag.n = 3;
  GridSpec g;
  g.radial_res = 8;
  g.r_max = 4;
  g.sphere_res = 4;
  SurfaceSampleSet s = sample_model(tag, g, 0);
  CHECK(translator_residual(s, tag.axis()) < 1e-6);
}

TEST_CASE("geodesic distances dominate chord lengths") {
  ModelTag tag;
  tag.kind = ModelKind::Cylinder;
  tag.n = 4;
  GridSpec g;
  g.sphere_res = 4;
  g.z_res = 5;
  SurfaceSampleSet s = sample_model(tag, g, -1);
  auto d = geodesic_distances(s, 0);
  for (std::size_t i = 0; i < s.size(); ++i)
    CHECK(d[i] >= (s.samples[i].x - s.samples[0].x).norm() - 1e-12);
}
