#include <doctest.h>

#include <cmath>
#include <random>

#include "rotsym/jacobi.hpp"

using namespace rotsym;

TEST_CASE("Crank-Nicolson decays the lowest sine mode at the continuum rate") {
  ZGrid g{2.0, 24};
  HeatCN cn(g);
  const int K = g.nodes();
  Mat v(K, K);
  const double k = kPi / (2 * g.L);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) v(i, j) = std::sin(k * (g.z(i) + g.L)) * std::sin(k * (g.z(j) + g.L));
  const Mat v0 = v;
  const Mat zero = Mat::Zero(K, K);
  const double dt = 1e-3, T = 0.5;
  for (int s = 0; s < static_cast<int>(T / dt + 0.5); ++s) cn.step(v, dt, 0.0, zero);
  const double rate = std::exp(-2 * k * k * T);
  CHECK((v - rate * v0).cwiseAbs().maxCoeff() < 2e-4);
}

TEST_CASE("discrete Laplacian is exact on quadratics") {
  const int K = 9;
  const double h = 0.25;
  Mat v(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) v(i, j) = std::pow(i * h, 2) + 3 * std::pow(j * h, 2);
  Mat L = discrete_laplacian(v, h);
  for (int i = 1; i < K - 1; ++i)
    for (int j = 1; j < K - 1; ++j) CHECK(L(i - 1, j - 1) == doctest::Approx(8.0));
}

TEST_CASE("gauge exponent") {
  CHECK(gauge_exponent(4, 6) == doctest::Approx(-1.0));
  CHECK(gauge_exponent(4, 2) == doctest::Approx(0.0));
  CHECK(gauge_exponent(5, 0) == doctest::Approx(0.5));
}

TEST_CASE("gauged and direct evolution agree") {
  auto init = [](double a, double b, double t) {
    return std::cos(0.3 * a) * std::cos(0.2 * b) * std::sqrt(-t);
  };
  EvolveOptions o;
  o.N = 12;
  o.fixed_steps = 2000;
  ModeRun g = evolve_mode(4, 6, 4, init, init, -2, -1, o);
  o.direct = true;
  ModeRun d = evolve_mode(4, 6, 4, init, init, -2, -1, o);
  CHECK((g.v.back() - d.v.back()).cwiseAbs().maxCoeff() < 1e-7);
}

TEST_CASE("l = 2 mode decays with exponent -1/2") {
  EvolveOptions o;
  o.N = 16;
  o.dt_rel = 0.01;
  for (int i = 0; i <= 10; ++i) o.record.push_back(-std::pow(100.0, 1 - i / 10.0));
  auto env = [](double, double, double t) { return std::sqrt(-t); };
  ModeRun r = evolve_mode(4, 6, 0.5, env, env, -100, -1, o);
  std::vector<double> t, y;
  for (std::size_t k = 0; k < r.times.size(); ++k) {
    t.push_back(r.times[k]);
    y.push_back(r.vhat(k)(o.N, o.N));
  }
  CHECK(fit_time_exponent(t, y) == doctest::Approx(-0.5).epsilon(0.05));
}

TEST_CASE("power fits recover exact power laws") {
  std::vector<double> x{1, 2, 4, 8}, y;
  for (double v : x) y.push_back(3 * std::pow(v, -0.7));
  CHECK(fit_power(x, y) == doctest::Approx(-0.7));
  CHECK_THROWS_AS(fit_power({1.0}, {1.0}), FitError);
  CHECK_THROWS_AS(fit_power({1.0, 2.0}, {1.0, -1.0}), FitError);
}

TEST_CASE("parallel and serial cylinder evolution agree") {
  SphereSpectrum spec = sphere_spectrum(4, 3);
  SphereField u = [](const Vec& th, double z1, double z2, double t) {
    return (th(0) * th(1) + 0.5 * th(2)) * std::cos(0.4 * z1) * std::cos(0.3 * z2) * std::sqrt(-t);
  };
  EvolveOptions o;
  o.N = 8;
  o.dt_rel = 0.05;
  CylinderField a = evolve_jacobi_cylinder(spec, u, u, 3, -4, -1, o, true);
  CylinderField b = evolve_jacobi_cylinder(spec, u, u, 3, -4, -1, o, false);
  for (std::size_t m = 0; m < a.coeff.size(); ++m) CHECK((a.coeff[m] - b.coeff[m]).norm() == 0.0);
}

TEST_CASE("mode-0 divergence integrates to zero") {
  SphereSpectrum spec = sphere_spectrum(4, 4);
  std::mt19937_64 g(5);
  std::normal_distribution<double> N(0, 1);
  RotationFieldSet f = reference_fields(4);
  for (int trial = 0; trial < 5; ++trial) {
    Vec c = Vec::Zero(spec.modes());
    for (int m = 1; m < spec.modes(); ++m) c(m) = 0.05 * N(g);
    RadiusFn r = [&](const Vec& th, double, double) {
      return std::sqrt(2.0) + c.dot(spec.eval_basis(th));
    };
    for (int a = 0; a < f.basis.N(); ++a) {
      Mode0Result res = mode0_check(spec, r, 4, f, a, 0.2, -0.1);
      CHECK(std::abs(res.divergence) < 1e-10);
    }
  }
}
