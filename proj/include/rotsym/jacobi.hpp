#pragma once

#include <functional>

#include "rotsym/common.hpp"
#include "rotsym/fields.hpp"
#include "rotsym/spectral.hpp"

namespace rotsym {

// uniform (2N+1)^2 node grid on [-L, L]^2
struct ZGrid {
  double L = 1;
  int N = 16;

  int nodes() const { return 2 * N + 1; }
  double h() const { return L / N; }
  double z(int i) const { return -L + i * h(); }
};

// Crank-Nicolson for v_t = Lap v + c v with Dirichlet data; the interior solve
// is diagonal in the discrete sine basis.
class HeatCN {
 public:
  explicit HeatCN(const ZGrid& g);
  // v holds all nodes; boundary rows/cols of `next_boundary` are the data at t + dt
  void step(Mat& v, double dt, double c, const Mat& next_boundary) const;
  const ZGrid& grid() const { return g_; }

 private:
  ZGrid g_;
  Mat Q_;
  Vec mu_;
};

Mat discrete_laplacian(const Mat& v, double h);

using ScalarField = std::function<double(double z1, double z2, double t)>;

struct EvolveOptions {
  int N = 32;
  double dt_rel = 0.02;  // geometric step dt = dt_rel * (-t)
  double dt_max = 1e300;
  int fixed_steps = 0;   // > 0: uniform steps instead
  bool direct = false;   // evolve v by the mode equation instead of v-hat by the heat equation
  std::vector<double> record;
};

struct ModeRun {
  int n = 4;
  double lambda = 0;
  double gamma = 0;  // gauge exponent (n-2-lambda)/(2(n-2))
  ZGrid grid;
  std::vector<double> times;
  std::vector<Mat> v;  // recorded v_m (ungauged)

  Mat vhat(std::size_t k) const;
  double at(std::size_t k, double z1, double z2) const;  // bilinear
};

double gauge_exponent(int n, double lambda);

// v(z, t0) = initial, v = boundary on the square boundary for t in (t0, t1]
ModeRun evolve_mode(int n, double lambda, double L, const ScalarField& initial,
                    const ScalarField& boundary, double t0, double t1, const EvolveOptions& opt);

// u on S^{n-2} x Omega_L as spectral coefficient fields
struct CylinderField {
  ZGrid grid;
  double t = 0;
  std::vector<Mat> coeff;  // per mode, nodes x nodes
};

using SphereField = std::function<double(const Vec& theta, double z1, double z2, double t)>;

CylinderField evolve_jacobi_cylinder(const SphereSpectrum& spec, const SphereField& initial,
                                     const SphereField& boundary, double L, double t0, double t1,
                                     const EvolveOptions& opt, bool parallel = true);

// slope of log|y| against log(-t)
double fit_time_exponent(const std::vector<double>& t, const std::vector<double>& y);

// sup over |z|_inf <= R and recorded t in [-R^2, -1] of |v| (bilinear on a 5x5 core lattice)
double core_sup(const ModeRun& run, double R, bool gauged = false);

struct DecayConfig {
  int n = 4;
  int l_min = 2;
  int l_max = 8;
  double eps = 1.0;
  std::vector<double> L0;  // empty: {2^4..2^7} n^{5/2}
  double core_R = 5.0;
  int N = 48;
  double dt_rel = 0.05;
};

struct DecayRow {
  double L0 = 0;
  int level = 0;
  int multiplicity = 0;
  double sup = 0;
};

struct DecayReport {
  std::vector<DecayRow> rows;
  std::vector<double> L0;
  std::vector<double> aggregate;
  double power = 0;
};

double mode_decay_bound(const ModeRun& run, double core_R);
DecayReport mode_decay_sweep(const DecayConfig& cfg);
double fit_power(const std::vector<double>& x, const std::vector<double>& y);

struct AffineFit {
  double A = 0, B = 0, C = 0;
  double residual = 0;
  double second_difference = 0;
};

// least squares over core points and recorded times in [-R^2, -1]
AffineFit case2_affine_extract(const ModeRun& run, double core_R);

struct Mode0Result {
  double divergence = 0;
  double plain_mean = 0;
};

// (a) integral of div_S(r J_alpha Theta) and (b) |integral of <K_alpha, nu>| over the slice z
Mode0Result mode0_check(const SphereSpectrum& spec, const RadiusFn& r, int degree,
                        const RotationFieldSet& fields, int alpha, double z1, double z2);

}  // namespace rotsym
