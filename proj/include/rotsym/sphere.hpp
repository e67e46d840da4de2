#pragma once

#include "rotsym/common.hpp"

namespace rotsym {

// Product quadrature on the unit k-sphere in R^{k+1}.
// k=1: uniform trapezoid with 2*res points.
// k>=2: Gauss-Legendre in the last coordinate x = cos(theta), recursing on S^{k-1}.
struct SphereGrid {
  int k = 0;
  int res = 0;
  std::vector<Vec> points;
  std::vector<double> weights;
  std::vector<std::vector<int>> neighbors;

  std::size_t size() const { return points.size(); }
};

SphereGrid make_sphere_grid(int k, int res);

// exact polynomial degree integrated by make_sphere_grid(k, res)
int sphere_grid_exact_degree(int k, int res);

// orthonormal basis of the tangent space at a unit vector
Mat tangent_basis(const Vec& theta);

}  // namespace rotsym
