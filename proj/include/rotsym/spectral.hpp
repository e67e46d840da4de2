#pragma once

#include <functional>

#include "rotsym/common.hpp"
#include "rotsym/sphere.hpp"

namespace rotsym {

// Eigen-decomposition of the Laplacian on S^{n-2}. Modes are ordered by level;
// within level l the order is m = +1, -1, +2, -2, ..., 0 (n = 4) or
// cos, sin (n = 3), so that modes 1..n-1 are proportional to Theta_1..Theta_{n-1}.
struct SphereSpectrum {
  int n = 0;
  int l_max = 0;
  std::vector<double> lambda_l;
  std::vector<int> mult_l;
  bool has_basis = false;
  SphereGrid grid;
  std::vector<int> level;
  Mat Y;  // modes x grid points

  int modes() const { return static_cast<int>(level.size()); }
  double lambda(int m) const { return lambda_l[level[m]]; }
  Vec eval_basis(const Vec& theta) const;
};

// res = 0 picks the smallest alias-free grid
SphereSpectrum sphere_spectrum(int n, int l_max, int res = 0, bool basis = true);

Vec harmonic_transform(const Vec& values, const SphereSpectrum& s);
Vec inverse_transform(const Vec& coeffs, const SphereSpectrum& s);

// L2 norm of a coordinate function Theta_i on the unit S^{n-2}
double theta_l2_norm(int n);

// d/ds f(exp(s J) theta) at s = 0 for J = (E_ij - E_ji)/sqrt(2), exact for
// f restricted to great circles being a trig polynomial of the given degree
double killing_derivative(const std::function<double(const Vec&)>& f, const Vec& theta, int i,
                          int j, int degree);

}  // namespace rotsym
