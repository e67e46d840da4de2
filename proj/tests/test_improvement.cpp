#include <doctest.h>

#include <cmath>
#include <random>

#include "rotsym/errors.hpp"
#include "rotsym/improvement.hpp"

using namespace rotsym;

TEST_CASE("linear coefficients are recovered from an affine slab") {
  const int n = 4;
  SphereSpectrum spec = sphere_spectrum(n, 2);
  std::mt19937_64 g(4);
  std::normal_distribution<double> N(0, 1);
  const int na = 3;
  Mat A(na, n - 1), B(na, n - 1), C(na, n - 1);
  for (int a = 0; a < na; ++a)
    for (int i = 0; i < n - 1; ++i) A(a, i) = N(g), B(a, i) = N(g), C(a, i) = N(g);
  CylinderSlab slab;
  for (double z1 : {-1.0, 0.0, 1.0})
    for (double z2 : {-0.5, 0.5}) slab.z.push_back({z1, z2});
  for (int a = 0; a < na; ++a) {
    Mat u = Mat::Zero(spec.grid.size(), slab.z.size());
    for (std::size_t k = 0; k < slab.z.size(); ++k)
      for (std::size_t p = 0; p < spec.grid.size(); ++p)
        for (int i = 0; i < n - 1; ++i)
          u(p, k) += (A(a, i) + B(a, i) * slab.z[k][0] + C(a, i) * slab.z[k][1]) * spec.Y(1 + i, p);
    slab.u.push_back(u);
  }
  TuningData d = extract_linear_coeffs(slab, spec);
  CHECK((d.A - A).norm() < 1e-12);
  CHECK((d.B - B).norm() < 1e-12);
  CHECK((d.C - C).norm() < 1e-12);

  slab.z.resize(2);
  for (auto& u : slab.u) u = u.leftCols(2).eval();
  CHECK_THROWS_AS(extract_linear_coeffs(slab, spec), FitError);
}

TEST_CASE("tuning data from a tilted, shifted radius function") {
  const int n = 4;
  SphereSpectrum spec = sphere_spectrum(n, 2);
  const double rho = std::sqrt(2.0);
  Vec beta(3), gam(3), del(3);
  beta << 0.01, -0.02, 0.005;
  gam << 0.003, 0.0, -0.004;
  del << -0.001, 0.002, 0.0;
  RadiusFn r = [&](const Vec& th, double z1, double z2) {
    double v = rho;
    for (int i = 0; i < n - 1; ++i) v += (beta(i) + gam(i) * z1 + del(i) * z2) * th(i);
    return v;
  };
  TuningData d = build_tuning(n, stencil_F(spec, r));
  const double c = d.theta_norm;
  for (int i = 0; i < n - 1; ++i) {
    // <Theta_i, Y_i> = |Theta_i| up to the sign of the basis function
    CHECK(std::abs(d.b(i)) == doctest::Approx(std::abs(beta(i)) * c).epsilon(1e-10));
    CHECK(std::abs(d.P(n - 1, i)) == doctest::Approx(std::abs(gam(i)) * c).epsilon(1e-10));
    CHECK(std::abs(d.P(n, i)) == doctest::Approx(std::abs(del(i)) * c).epsilon(1e-10));
  }
  CHECK((d.P + d.P.transpose()).norm() == 0.0);

  RotationFieldSet f = retune_fields(reference_fields(n), d);
  for (int i = 0; i < n - 1; ++i) CHECK(std::abs(f.q(i)) == doctest::Approx(std::abs(beta(i))).epsilon(1e-4));
}

TEST_CASE("tuning stencil layout") {
  const auto& s = tuning_stencil();
  CHECK(s[0] == std::array<double, 2>{0, 0});
  CHECK(s[1] == std::array<double, 2>{1, 0});
  CHECK(s[2] == std::array<double, 2>{-1, 0});
  CHECK(s[3] == std::array<double, 2>{0, 1});
  CHECK(s[4] == std::array<double, 2>{0, -1});
}

TEST_CASE("one improvement run halves the defect") {
  ImprovementConfig c;
  c.level = 1;
  c.L0 = 512;
  ImprovementResult r = improvement_experiment(c);
  CHECK(r.defect_before == doctest::Approx(c.eps).epsilon(0.01));
  CHECK(r.factor <= 0.5);
}
