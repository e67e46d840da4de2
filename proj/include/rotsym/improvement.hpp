#pragma once

#include <array>

#include "rotsym/fields.hpp"
#include "rotsym/jacobi.hpp"
#include "rotsym/spectral.hpp"

namespace rotsym {

// u_alpha tabulated on the spectrum grid at a set of z points
struct CylinderSlab {
  std::vector<std::array<double, 2>> z;
  std::vector<Mat> u;  // per alpha: grid points x z points
};

struct TuningData {
  int n = 0;
  Mat A, B, C;  // alpha x (n-1)
  Vec b;
  Mat P;
  Mat F;  // (n-1) x 5 at (0,0), (1,0), (-1,0), (0,1), (0,-1)
  double theta_norm = 1;
};

// stencil points in the column order of TuningData::F
const std::array<std::array<double, 2>, 5>& tuning_stencil();

TuningData extract_linear_coeffs(const CylinderSlab& slab, const SphereSpectrum& spec);

// F_i(z) = integral of r Y_i over the sphere, on the tuning stencil
Mat stencil_F(const SphereSpectrum& spec, const RadiusFn& r);

// literal b_i = F_i(0,0) and P from centered differences
TuningData build_tuning(int n, const Mat& F);

// S' = S exp(P/c), q' = q + S b/c with c = |Theta_i|_{L2}; `literal` uses c = 1
RotationFieldSet retune_fields(const RotationFieldSet& f, const TuningData& d, bool literal = false);
RotationFieldSet retune_fields(const RotationFieldSet& f, const SphereSpectrum& spec,
                               const RadiusFn& r, bool literal = false);

struct ImprovementConfig {
  int n = 4;
  int level = 2;
  double L0 = 512;
  double eps = 1e-10;
  double core_R = 5;
  int N = 48;
  double dt_rel = 0.05;
  int sphere_res = 6;
  int stride = 2;
};

struct ImprovementResult {
  double L0 = 0;
  int level = 0;
  double eps = 0;
  double amplitude = 0;
  double defect_before = 0;
  double defect_after = 0;
  double factor = 0;
  double b_norm = 0;
  double P_norm = 0;
  double magnitude_after = 0;
  TuningData tuning;
};

ImprovementResult improvement_experiment(const ImprovementConfig& cfg);

}  // namespace rotsym
