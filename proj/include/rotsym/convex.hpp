#pragma once

#include <array>
#include <optional>

#include "rotsym/common.hpp"
#include "rotsym/geometry.hpp"

namespace rotsym {

using Vec3 = Eigen::Vector3d;

struct TriMesh {
  std::vector<Vec3> V;
  std::vector<std::array<int, 3>> F;
};

// subdivided icosahedron projected to the unit sphere
TriMesh icosphere(int subdiv);
TriMesh scaled(const TriMesh& m, const Vec3& axes, const Mat& R = Mat::Identity(3, 3));

// throws PreconditionError on flat or nonconvex input
void check_convex(const TriMesh& m, double tol = 1e-8);

struct DiameterReport {
  double d1 = 0;
  double d2 = 0;
  double ratio = 0;
  std::size_t nodes = 0;
};

struct DiameterOptions {
  int steiner = 2;  // interior points per edge
  bool parallel = true;
};

// d2: farthest vertex pair. d1: longest shortest path from a mesh vertex on the
// Steiner graph (edge points joined across each face); never below the
// polyhedral geodesic distance
DiameterReport diameters(const TriMesh& m, const DiameterOptions& opt = {});

// hypersurface samples with mean curvature, e.g. a cross-section in R^n
struct CurvedPoints {
  std::vector<Vec> x;
  std::vector<double> H;
};

CurvedPoints round_sphere_points(int n, double R, int res);
// S^{n-2}_rho x [-R, R] in R^n with rho = sqrt(2(n-2))
CurvedPoints cylinder_cross_section(int n, double R, int sphere_res, int z_res);

double eccentricity(const CurvedPoints& p);

struct ConeReport {
  bool contained = true;
  double margin = 0;  // +inf when no point lies outside B_1(p)
  std::size_t tested = 0;
};

ConeReport cone_containment(const std::vector<Vec>& pts, double eta, const Vec& apex,
                            const Vec& omega);

// area-weighted point set of an n-dimensional hypersurface in R^{n+1}
struct WeightedPoints {
  int n = 0;
  std::vector<Vec> x;
  std::vector<double> w;
};

// S^k_{sqrt(2k)} x [-R, R]^{n-k} in R^{n+1}; Gauss-Legendre in the flat factor
WeightedPoints shrinker_points(int k, int n, int sphere_res, int flat_nodes, double R);
// hyperplane x_{n+1} = 0 restricted to [-R, R]^n
WeightedPoints hyperplane_points(int n, int nodes, double R);
WeightedPoints transform(const WeightedPoints& p, const Mat& R, const Vec& b);
WeightedPoints scale_points(const WeightedPoints& p, double c);

struct DensityQuery {
  Vec x0;
  double t0 = 1;
  double R = 0;  // 0: 14 sqrt(t0)
};

struct DensityValue {
  double value = 0;
  double tail = 0;  // Gaussian tail bound e^{-R^2/(8 t0)}
};

DensityValue gaussian_density(const WeightedPoints& p, const DensityQuery& q, double tol = 1e-10);

struct DensityRow {
  int k = 0;
  int n = 0;
  double value = 0;
  double error = 0;  // quadrature difference between two resolutions plus tail
  double exact = 0;
};

std::vector<DensityRow> density_table(int n = 4);

struct HeightReport {
  bool applicable = true;
  double violation = 0;
  double tip_rate = 0;
};

// max positive part of the difference quotient of <x, omega> - t along trajectories;
// the first trajectory is taken as the tip one
HeightReport height_monotonicity(const ModelTag& tag, const std::vector<Trajectory>& tr);

}  // namespace rotsym
