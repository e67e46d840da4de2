#pragma once

#include <functional>

#include "rotsym/common.hpp"

namespace rotsym {

// Dirichlet heat kernel on [-L, L]^2 by the method of images
struct ImageKernel {
  double L = 1;
  int K_max = -1;     // < 0: smallest cutoff whose tail bound is below tol
  double tol = 1e-12;
};

struct KernelValue {
  double value = 0;
  double error = 0;  // certified bound on the discarded images
  int K = 0;
};

KernelValue eval_dirichlet_kernel(const ImageKernel& k, double x1, double x2, double y1, double y2,
                                  double t);

// outward normal derivative in y at a boundary point; side 0..3 = y1 = L, y2 = L, y1 = -L, y2 = -L
KernelValue kernel_normal_derivative(const ImageKernel& k, double x1, double x2, int side,
                                     double s_along, double t);

// tail bound of the 1D image sum sum_{|k| > K} for cutoff K
double image_tail_bound(double L, double t, int K);
int image_cutoff(double L, double t, double tol);

struct QuadResult {
  double value = 0;
  double error = 0;
};

QuadResult mass_bound(const ImageKernel& k, double x1, double x2, double t);

// integral of K_t(x, .) f over the square
QuadResult kernel_apply(const ImageKernel& k, double x1, double x2, double t,
                        const std::function<double(double, double)>& f);

struct FluxValue {
  double flux = 0;
  double error = 0;
  double C50 = 0;    // flux * s^2 / (L^2 e^{-L^2/(50 s)})
  double C1000 = 0;  // same with 1000
};

FluxValue boundary_flux_bound(const ImageKernel& k, double x1, double x2, double s);

struct FluxSweepRow {
  double L, x1, x2, s;
  FluxValue v;
};

struct FluxSweep {
  std::vector<FluxSweepRow> rows;
  double C50 = 0;
  double C1000 = 0;
};

FluxSweep flux_sweep(double L, const std::vector<double>& s_values, int x_per_axis = 3);

using BoundaryData = std::function<double(double y1, double y2, double tau)>;

QuadResult solve_via_kernel(const ImageKernel& k, const std::function<double(double, double)>& u0,
                            const BoundaryData& g, double t0, double x1, double x2, double t);

}  // namespace rotsym
