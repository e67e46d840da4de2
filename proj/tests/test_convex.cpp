#include <doctest.h>

#include <cmath>
#include <random>

#include "rotsym/convex.hpp"
#include "rotsym/errors.hpp"
#include "rotsym/fields.hpp"

using namespace rotsym;

TEST_CASE("round sphere diameters") {
  DiameterReport r = diameters(icosphere(2), {2, true});
  CHECK(r.d2 == doctest::Approx(2.0));
  // great-circle distance between antipodes is pi
  CHECK(r.d1 == doctest::Approx(kPi).epsilon(0.02));
  CHECK(r.ratio < 3);
}

TEST_CASE("parallel and serial shortest paths agree") {
  TriMesh m = scaled(icosphere(2), Vec3(1, 3, 5));
  DiameterReport a = diameters(m, {1, true}), b = diameters(m, {1, false});
  CHECK(a.d1 == b.d1);
  CHECK(a.nodes == b.nodes);
}

TEST_CASE("refining the mesh moves d1 by at most the edge length") {
  DiameterReport a = diameters(icosphere(1), {2, true});
  DiameterReport b = diameters(icosphere(2), {2, true});
  const TriMesh m = icosphere(1);
  const double h = (m.V[m.F[0][0]] - m.V[m.F[0][1]]).norm();
  CHECK(b.d1 - a.d1 <= h);
}

TEST_CASE("random ellipsoids satisfy d1 <= 3 d2") {
  std::mt19937_64 g(9);
  std::uniform_real_distribution<double> A(1, 20);
  const TriMesh base = icosphere(1);
  for (int i = 0; i < 50; ++i) {
    DiameterReport r = diameters(scaled(base, Vec3(1, A(g), A(g))), {1, true});
    CHECK(r.d2 <= r.d1);
    CHECK(r.d1 <= 3 * r.d2);
  }
}

TEST_CASE("flat and dented meshes are rejected") {
  CHECK_THROWS_AS(diameters(scaled(icosphere(1), Vec3(1, 1, 0))), PreconditionError);
  TriMesh m = icosphere(1);
  m.V[0] *= 0.5;
  CHECK_THROWS_AS(diameters(m), PreconditionError);
}

TEST_CASE("eccentricity of round spheres and its scale invariance") {
  for (int n : {3, 4, 5})
    for (double R : {0.3, 1.0, 7.0})
      CHECK(eccentricity(round_sphere_points(n, R, 6)) == doctest::Approx(2.0 * (n - 2)));
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> U(0.1, 10);
  CurvedPoints p = cylinder_cross_section(4, 3, 4, 9);
  const double e = eccentricity(p);
  for (int k = 0; k < 5; ++k) {
    const double c = U(g);
    CurvedPoints q = p;
    for (auto& x : q.x) x *= c;
    for (auto& h : q.H) h /= c;
    CHECK(std::abs(eccentricity(q) - e) < 1e-10);
  }
}

TEST_CASE("cylinder cross-section eccentricity grows linearly in R") {
  const int n = 4;
  double prev = 0;
  for (double R : {2.0, 4.0, 8.0}) {
    const double e = eccentricity(cylinder_cross_section(n, R, 4, 17));
    CHECK(e >= std::sqrt((n - 2) / 2.0) * R);
    CHECK(e > prev);
    prev = e;
  }
}

TEST_CASE("cone containment") {
  Vec apex = Vec::Zero(3), w = Vec::Unit(3, 2);
  std::vector<Vec> inside{Vec::Unit(3, 0) * 0.5};
  ConeReport r = cone_containment(inside, 0.5, apex, w);
  CHECK(r.contained);
  CHECK(r.tested == 0);
  Vec below(3);
  below << 0.1, 0.0, -3.0;
  CHECK(!cone_containment({below}, 0.5, apex, w).contained);

  BowlProfile b = solve_bowl_profile(2, 40, 1e-10);
  const double rmin = 4;
  std::vector<Vec> pts;
  for (std::size_t i = 0; i < b.r.size(); ++i)
    if (b.r[i] >= rmin) {
      Vec x(3);
      x << b.r[i], 0, b.phi[i];
      pts.push_back(x);
    }
  CHECK(cone_containment(pts, rmin / 4, apex, w).contained);
}

TEST_CASE("Gaussian density of a hyperplane is one") {
  DensityQuery q;
  q.x0 = Vec::Zero(3);
  CHECK(gaussian_density(hyperplane_points(2, 60, 14), q).value == doctest::Approx(1).epsilon(1e-10));
}

TEST_CASE("density is invariant under rigid motion and parabolic scaling") {
  WeightedPoints p = shrinker_points(2, 3, 5, 40, 14);
  DensityQuery q;
  q.x0 = Vec::Zero(4);
  q.x0(3) = 0.3;
  const double v = gaussian_density(p, q).value;
  Mat G = Mat::Zero(4, 4);
  G(0, 3) = 0.5, G(3, 0) = -0.5, G(1, 2) = 0.2, G(2, 1) = -0.2;
  const Mat R = antisym_exp(G);
  Vec b(4);
  b << 1, -2, 0.5, 3;
  DensityQuery qm = q;
  qm.x0 = R * q.x0 + b;
  CHECK(std::abs(gaussian_density(transform(p, R, b), qm).value - v) < 1e-10);
  const double c = 1.7;
  DensityQuery qs = q;
  qs.x0 = c * q.x0;
  qs.t0 = c * c;
  CHECK(std::abs(gaussian_density(scale_points(p, c), qs).value - v) < 1e-8);
}

TEST_CASE("shrinker densities are distinct") {
  auto rows = density_table(4);
  REQUIRE(rows.size() == 3);
  for (const auto& r : rows) CHECK(r.value == doctest::Approx(r.exact).epsilon(1e-12));
  CHECK(rows[0].exact == doctest::Approx(4 / std::exp(1.0)));
  CHECK(rows[2].exact == doctest::Approx(32 / (3 * std::exp(2.0))));
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = a + 1; b < 3; ++b)
      CHECK(std::abs(rows[a].value - rows[b].value) > 10 * std::max(rows[a].error, rows[b].error));
}

TEST_CASE("density rejects a short truncation radius") {
  DensityQuery q;
  q.x0 = Vec::Zero(3);
  q.R = 5;
  CHECK_THROWS_AS(gaussian_density(hyperplane_points(2, 10, 5), q), PrecisionError);
}

TEST_CASE("height decreases along the Bowl flow") {
  BowlProfile b = solve_bowl_profile(3, 30, 1e-10);
  ModelTag tag;
  tag.kind = ModelKind::Bowl;
  tag.n = 3;
  auto tr = bowl_trajectories(b, {0.0, 1.0, 4.0}, Vec::Unit(3, 0), 0, 1, 200);
  HeightReport h = height_monotonicity(tag, tr);
  CHECK(h.applicable);
  CHECK(h.violation <= 1e-8);
  CHECK(h.tip_rate == 0.0);
  ModelTag cyl;
  cyl.kind = ModelKind::Cylinder;
  CHECK(!height_monotonicity(cyl, tr).applicable);
}
