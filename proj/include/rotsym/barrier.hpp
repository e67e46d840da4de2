#pragma once

#include <array>
#include <functional>

#include "rotsym/common.hpp"
#include "rotsym/geometry.hpp"

namespace rotsym {

struct BarrierParams {
  int n = 4;
  int j = 0;
  double Lambda1 = 10;
  double c_n = 0.5;
  double D = 0, W = 0, T = 0;
  double lambda = 0, mu = 0;
  double phi_scale = 1;  // 0 switches Phi off
};

BarrierParams barrier_params(int n, int j, double Lambda1, double c_n);

// phi(s) = (c_n^2/n) D^{-1} log cosh(s) and its first two derivatives
double barrier_phi(const BarrierParams& p, double s, int deriv = 0);

struct PhiReport {
  std::array<bool, 5> ok{};
  double sup_dphi = 0, dphi_bound = 0;
  double sup_ddphi = 0, ddphi_bound = 0;
  double phi_W = 0, phi_W_bound = 0;
  double phi_core = 0, phi_core_bound = 0;
};

PhiReport phi_report(const BarrierParams& p);

struct PhiThresholds {
  int j1 = -1;              // first j from which conditions 3 and 4 hold through j_max
  int slope_scan = -1;      // same for condition 1, by scan
  int slope_analytic = -1;  // c_n <= D_j^{1/2}
};

PhiThresholds phi_thresholds(int n, double Lambda1, double c_n, int j_max = 4000);

// half of min H d^{1/2} / 2 over the Bowl^{n-1} x R profile with d in [1, D_max]
double measure_c_n(int n, double D_max);

enum class Piece { Interior, Lateral, Split, Initial };

struct RegionSample {
  Vec x, nu;
  double H = 0, A2 = 0;
  double dist = 0;  // distance to the tip line
  double t = 0;
  Piece piece = Piece::Interior;
};

struct RegionGridSpec {
  int radial = 32;
  int sphere_res = 3;
  int split = 20;  // geometric values per sign of the split coordinate
  int time = 9;
};

struct RegionSpec {
  BarrierParams params;
  Vec omega;  // split direction
  double t_bar = -1;
  std::vector<RegionSample> samples;
};

// Omega_j over the translating Bowl^{n-1} x R with kappa = 1
RegionSpec bowl_region(const BarrierParams& p, const BowlProfile& prof, const RegionGridSpec& g);
RegionSpec transform(const RegionSpec& r, const Mat& R, const Vec& b);

struct CoefficientReport {
  double max = 0;
  bool negative = false;
  std::size_t count = 0;
};

// lambda - mu|A|^2/(H-mu) - d_t Phi + Lap Phi + |grad Phi|^2 + 2<grad Phi, grad H>/(H-mu)
CoefficientReport barrier_coefficient(const RegionSpec& r);

using JacobiField = std::function<double(const RegionSample&)>;

JacobiField killing_jacobi(const Mat& B, const Vec& q);
JacobiField mean_curvature_jacobi();

struct MaxPrincipleReport {
  // log of sup |f| per piece (-inf when empty or zero)
  double interior = 0, lateral = 0, split = 0, initial = 0;
  double boundary() const;
  bool pass = false;
  double tol = 0;
};

MaxPrincipleReport max_principle_check(const RegionSpec& r, const JacobiField& u,
                                       double tol = 1e-12);

struct BarrierRow {
  int j = 0;
  BarrierParams params;
  double coefficient_max = 0;
  MaxPrincipleReport trivial;  // u = H
  MaxPrincipleReport field;    // synthesized <K, nu>
  double scale = 0;
  double log2_final = 0;       // log2 sup |u| H near the center
};

struct BarrierSweep {
  int n = 4;
  double c_n = 0;
  PhiThresholds thresholds;
  std::vector<BarrierRow> rows;
  // fitted slopes of log2 sup |f| in j
  double slope_lateral = 0, slope_split = 0, slope_initial = 0, slope_final = 0;
};

struct BarrierConfig {
  int n = 4;
  double Lambda1 = 10;
  double c_n = 0;  // 0: measured
  double eps = 1;
  int j_first = 0; // 0: thresholds.j1
  int j_step = 25;
  int j_count = 9;
  RegionGridSpec grid;
};

BarrierSweep barrier_sweep(const BarrierConfig& cfg);

struct Step3Report {
  int j = 0;
  double lambda_j = 0, c_j = 0;
  double identity = 0;  // lambda_j - 2 c_j^2
  double coefficient_max = 0;
  double min_H_over_ncj = 0;
  double sup_lateral = 0, sup_initial = 0, sup_all = 0;
  double bound = 0;     // 2^{-j/4}
  bool pass = false;
};

// Bowl^n translator, Omega_j = {h <= 2^{j/100} Lambda, t in [-2^{j/100}, 0]},
// f = e^{lambda_j t} u / (H - c_j) with u scaled to 2^{-j/2} eps1 on the lateral boundary
Step3Report translator_step3_barrier(int j, double Lambda, const BowlProfile& prof, double eps1,
                                     const RegionGridSpec& g);

// first j from which exp(-2^{j/50}) 2^{j/50} / c_j <= 2^{-j} holds through j_max
int step3_slab_threshold(int j_max = 4000);

}  // namespace rotsym
