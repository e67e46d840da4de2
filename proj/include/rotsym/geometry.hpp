#pragma once

#include <functional>
#include <string>
#include <utility>

#include "rotsym/common.hpp"

namespace rotsym {

// Radial profile of Bowl^n in R^{n+1}: graph x_{n+1} = phi(|x|), x in R^n.
struct BowlProfile {
  int n = 0;
  std::vector<double> r, phi, dphi;
  double tolerance = 0;

  struct Point {
    double phi, dphi, ddphi;
  };

  double ddphi_at(std::size_t i) const;
  Point at(double radius) const;
  double r_max() const { return r.back(); }
};

// phi'' from the profile equation phi''/(1+phi'^2) + (n-1) phi'/r = 1
double bowl_ddphi(int n, double r, double dphi);

BowlProfile solve_bowl_profile(int n, double r_max, double tol);

// max over interior grid points of |phi''/(1+phi'^2) + (n-1)phi'/r - 1|;
// with `midpoints` the check is made at step midpoints using the
// second derivative of the quintic Hermite interpolant instead
double bowl_ode_residual(const BowlProfile& p, bool midpoints = false);

enum class ModelKind { Cylinder, ShrinkingCylinderFamily, Bowl, BowlCrossR, UserMesh };

struct ModelTag {
  ModelKind kind = ModelKind::Cylinder;
  int n = 4;
  double t = -1.0;
  double kappa = 1.0;

  std::string name() const;
  // translation direction of the translator models
  Vec axis() const;
};

struct SurfaceSample {
  Vec x;
  Vec nu;
  double H = 0;
  double A2 = 0;
  Vec kappa;  // ascending
};

using Adjacency = std::vector<std::vector<std::pair<int, double>>>;

struct SurfaceSampleSet {
  ModelTag tag;
  std::vector<SurfaceSample> samples;
  Adjacency adjacency;

  std::size_t size() const { return samples.size(); }
  int ambient_dim() const { return samples.empty() ? 0 : static_cast<int>(samples[0].x.size()); }
};

struct GridSpec {
  int sphere_res = 6;
  int z_res = 9;
  double z_extent = 4.0;
  int radial_res = 12;
  double r_max = 6.0;
};

double cylinder_radius(int n, double t);
double cylinder_H(int n, double t);

SurfaceSampleSet sample_model(const ModelTag& tag, const GridSpec& grid, double t);

double translator_residual(const SurfaceSampleSet& s, const Vec& omega);

struct FlowSamples {
  std::vector<double> times;
  std::vector<SurfaceSampleSet> slices;
};

FlowSamples sample_cylinder_family(int n, const GridSpec& grid, const std::vector<double>& times);
// translator models moved rigidly by t * kappa * axis
FlowSamples sample_translator_flow(const ModelTag& tag, const GridSpec& grid,
                                   const std::vector<double>& times);

std::vector<double> geodesic_distances(const SurfaceSampleSet& s, int source);

// samples within L/H(center) of the center at slice `slice`, over slices in
// [t - T/H^2, t]; sample identity is the index within a slice
FlowSamples parabolic_neighborhood(const FlowSamples& flow, int center, int slice, double L,
                                   double T);

// Radial graph over S^{n-2} x R^2 in R^{n+1}: x = (r(theta,z) theta, z1, z2)
using RadiusFn = std::function<double(const Vec& theta, double z1, double z2)>;

// geometry of an embedding X: R^d -> R^{d+1} at u = 0 by central differences;
// normal oriented against `outward`
SurfaceSample parametric_sample(const std::function<Vec(const Vec&)>& X, int d,
                                const Vec& outward, double h = 1e-4);

SurfaceSample radial_graph_sample(int n, const RadiusFn& r, const Vec& theta, double z1, double z2);
SurfaceSampleSet sample_radial_graph(int n, const RadiusFn& r, const GridSpec& grid);

SurfaceSampleSet transform(const SurfaceSampleSet& s, const Mat& R, const Vec& b);

// material points of Bowl(n, kappa=1) moving by the normal flow
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec> x;
};

std::vector<Trajectory> bowl_trajectories(const BowlProfile& p, const std::vector<double>& r0,
                                          const Vec& direction, double t0, double t1, int steps);

}  // namespace rotsym
