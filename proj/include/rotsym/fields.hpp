#pragma once

#include <string>

#include "rotsym/common.hpp"
#include "rotsym/errors.hpp"
#include "rotsym/geometry.hpp"

namespace rotsym {

struct SoBasis {
  int n = 0;
  std::vector<Mat> J;
  std::vector<std::pair<int, int>> index;  // (i, j), i < j, 0-based

  int N() const { return static_cast<int>(J.size()); }
};

SoBasis standard_so_basis(int n);

struct RotationFieldSet {
  Mat S;
  Vec q;
  SoBasis basis;

  int n() const { return basis.n; }
  Vec eval(int alpha, const Vec& x) const;
  // rows: K_alpha(x)
  Mat eval_all(const Vec& x) const;
};

RotationFieldSet reference_fields(int n);

// right singular vectors of the stacked J_alpha S^T with sigma < cutoff * sigma_max
Mat gauge_kernel(const RotationFieldSet& f, double cutoff = 1e-10);
void impose_gauge(RotationFieldSet& f, double cutoff = 1e-10);

// fields K'_alpha = sum_beta w_{alpha beta} K_beta, returned as a dense evaluator
struct MixedFields {
  RotationFieldSet base;
  Mat omega;
  Mat eval_all(const Vec& x) const { return omega * base.eval_all(x); }
};

struct SymmetryReport {
  double defect = 0;
  double magnitude = 0;
  std::size_t count = 0;
  std::string region;
};

SymmetryReport symmetry_defect(const RotationFieldSet& f, const SurfaceSampleSet& s);
SymmetryReport symmetry_defect_serial(const RotationFieldSet& f, const SurfaceSampleSet& s);
SymmetryReport symmetry_defect(const MixedFields& f, const SurfaceSampleSet& s);
SymmetryReport symmetry_defect(const RotationFieldSet& f, const std::vector<SurfaceSample>& s);

struct FitResult {
  RotationFieldSet fields;
  SymmetryReport report;
  int iterations = 0;
  double objective = 0;
  double sigma_ratio = 0;
};

struct FitNonconvergence : Error {
  FitResult best;
  FitNonconvergence(const std::string& what, FitResult b) : Error(what), best(std::move(b)) {}
};

FitResult fit_rotation_fields(const std::vector<SurfaceSample>& samples,
                              const RotationFieldSet& init, int max_iter = 60, double tol = 1e-12);
FitResult fit_rotation_fields(const SurfaceSampleSet& samples, const RotationFieldSet& init,
                              int max_iter = 60, double tol = 1e-12);

// generators of so(n+1) orthogonal to so(n-1) + so(2): pairs (i, a), i < n-1 <= a
std::vector<Mat> complement_generators(int n);

Mat antisym_exp(const Mat& A);
Mat polar_orthogonal(const Mat& A);

struct Alignment {
  Mat omega;
  double residual = 0;
  double identity_residual = 0;
  std::size_t count = 0;
};

// residual = sup over samples in the ball of max_alpha |K1 - omega K2| * H_center
Alignment align_field_sets(const RotationFieldSet& K1, const RotationFieldSet& K2,
                           const Vec& center, double radius, double H_center,
                           const SurfaceSampleSet& samples);
double alignment_residual(const RotationFieldSet& K1, const RotationFieldSet& K2, const Mat& omega,
                          const Vec& center, double radius, double H_center,
                          const SurfaceSampleSet& samples);

struct EpsSymmetry {
  bool symmetric = false;
  RotationFieldSet witness;
  SymmetryReport report;
};

// neighborhood defaults are the standard 100 n^{5/2}, 100^2 n^5; `scale` multiplies the field set
EpsSymmetry is_eps_symmetric(const FlowSamples& flow, int center, int slice, double eps,
                             const RotationFieldSet& init, double L = -1, double T = -1,
                             double scale = 1.0);

}  // namespace rotsym
