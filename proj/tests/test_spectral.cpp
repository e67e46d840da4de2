#include <doctest.h>

#include <cmath>
#include <random>

#include "rotsym/fields.hpp"
#include "rotsym/spectral.hpp"
#include "rotsym/sphere.hpp"

using namespace rotsym;

TEST_CASE("sphere grid integrates monomials exactly") {
  for (int k : {1, 2, 3, 4}) {
    SphereGrid g = make_sphere_grid(k, 5);
    double area = 0, second = 0, fourth = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.points[i](0);
      area += g.weights[i];
      second += g.weights[i] * x * x;
      fourth += g.weights[i] * x * x * x * x;
    }
    const double A = sphere_area(k), d = k + 1;
    CHECK(area == doctest::Approx(A).epsilon(1e-13));
    CHECK(second == doctest::Approx(A / d).epsilon(1e-13));
    CHECK(fourth == doctest::Approx(3 * A / (d * (d + 2))).epsilon(1e-13));
  }
}

TEST_CASE("Laplacian spectrum of S^{n-2}") {
  for (int n : {3, 4}) {
    SphereSpectrum s = sphere_spectrum(n, 4);
    const int m = n - 2;
    for (int l = 0; l <= 4; ++l) {
      CHECK(s.lambda_l[l] == doctest::Approx(l * (l + m - 1.0)));
      // dim of degree-l harmonics on S^m
      const double dim = binomial(l + m, m) - binomial(l + m - 2, m);
      CHECK(s.mult_l[l] == doctest::Approx(dim));
    }
    Mat W = s.Y;
    for (std::size_t p = 0; p < s.grid.size(); ++p) W.col(p) *= s.grid.weights[p];
    Mat G = W * s.Y.transpose();
    CHECK((G - Mat::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("first modes are the coordinate functions") {
  const int n = 4;
  SphereSpectrum s = sphere_spectrum(n, 2);
  const double c = theta_l2_norm(n);
  CHECK(c == doctest::Approx(std::sqrt(sphere_area(n - 2) / (n - 1))));
  for (std::size_t p = 0; p < s.grid.size(); ++p)
    for (int i = 0; i < n - 1; ++i)
      CHECK(std::abs(s.Y(1 + i, p)) ==
            doctest::Approx(std::abs(s.grid.points[p](i)) / c).epsilon(1e-12));
}

TEST_CASE("transform round trip") {
  SphereSpectrum s = sphere_spectrum(4, 5);
  std::mt19937_64 g(2);
  std::normal_distribution<double> N(0, 1);
  Vec c(s.modes());
  for (int i = 0; i < c.size(); ++i) c(i) = N(g);
  Vec back = harmonic_transform(inverse_transform(c, s), s);
  CHECK((back - c).norm() < 1e-11);
}

TEST_CASE("Killing derivative matches a rotated finite difference") {
  const int n = 5;
  auto f = [](const Vec& x) { return x(0) * x(1) + 0.3 * x(2) * x(2) * x(3) - x(1); };
  Vec th(n - 1);
  th << 0.2, -0.5, 0.7, 0.1;
  th.normalize();
  for (auto [i, j] : {std::pair{0, 1}, {1, 3}, {0, 2}}) {
    Mat J = Mat::Zero(n - 1, n - 1);
    J(i, j) = 1 / std::sqrt(2.0);
    J(j, i) = -1 / std::sqrt(2.0);
    const double h = 1e-5;
    const double fd = (f(antisym_exp(h * J) * th) - f(antisym_exp(-h * J) * th)) / (2 * h);
    const double kd = killing_derivative(f, th, i, j, 3);
    CHECK(kd == doctest::Approx(fd).epsilon(1e-8));
  }
}
