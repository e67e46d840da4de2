#include "rotsym/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <limits>
#include <random>

#include "rotsym/barrier.hpp"
#include "rotsym/convex.hpp"
#include "rotsym/errors.hpp"
#include "rotsym/fields.hpp"
#include "rotsym/geometry.hpp"
#include "rotsym/heat_kernel.hpp"
#include "rotsym/improvement.hpp"
#include "rotsym/jacobi.hpp"

namespace fs = std::filesystem;

namespace rotsym {

std::string tool_version() { return "0.1.0"; }

void ExperimentOutput::check(const std::string& name, double measured, const std::string& relation,
                             double bound, const std::string& source) {
  bool ok = false;
  if (relation == "<=") ok = measured <= bound;
  else if (relation == "<") ok = measured < bound;
  else if (relation == ">=") ok = measured >= bound;
  else if (relation == ">") ok = measured > bound;
  else if (relation == "==") ok = measured == bound;
  else if (relation == "finite") ok = std::isfinite(measured);
  else throw DomainError("unknown relation " + relation);
  assertions.push_back({name, measured, relation, bound, ok, source});
}

namespace {

double num(const Json& p, const char* k) { return p.at(k).get<double>(); }
int integer(const Json& p, const char* k) { return p.at(k).get<int>(); }
std::vector<double> nums(const Json& p, const char* k) { return p.at(k).get<std::vector<double>>(); }

double max_of(const std::vector<double>& v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  return m;
}

Mat random_rotation(std::mt19937_64& g, int d) {
  std::normal_distribution<double> N(0, 1);
  Mat A(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) A(i, j) = N(g);
  Eigen::HouseholderQR<Mat> qr(A);
  Mat Q = qr.householderQ();
  if (Q.determinant() < 0) Q.col(0) *= -1;
  return Q;
}

// ---- bowl-profile

ExperimentOutput run_bowl_profile(const Json& p, std::uint64_t) {
  ExperimentOutput out;
  Table prof{"bowl_profile",
             {"n", "r", "phi", "dphi", "H", "dphi_ge_r_over_n", "phi_ge_r2_over_2n", "H_lt_n_over_r"}};
  Table res{"bowl_residual", {"n", "r_max", "residual", "grid_points", "inequality_failures"}};
  Plot plot{"bowl_profile", "Bowl profiles", "r", "phi", false, false, {}};
  const double r_max = num(p, "r_max");
  for (double nd : nums(p, "n_values")) {
    const int n = static_cast<int>(nd);
    BowlProfile b = solve_bowl_profile(n, r_max, num(p, "tol"));
    const double resid = bowl_ode_residual(b, true);
    int fails = 0;
    Series s{"n=" + fmt(n), {}, {}, false};
    for (std::size_t i = 0; i < b.r.size(); ++i) {
      const double r = b.r[i];
      const double H = 1 / std::sqrt(1 + b.dphi[i] * b.dphi[i]);
      const bool a = b.dphi[i] >= r / n, c = b.phi[i] >= r * r / (2.0 * n);
      const bool h = r < 0.1 || H < n / r;
      fails += !a + !c + !h;
      prof.add({fmt(n), fmt(r), fmt(b.phi[i]), fmt(b.dphi[i]), fmt(H), fmt(a), fmt(c),
                r < 0.1 ? "na" : fmt(h)});
      s.x.push_back(r);
      s.y.push_back(b.phi[i]);
    }
    res.add({fmt(n), fmt(r_max), fmt(resid), fmt(b.r.size()), fmt(fails)});
    out.check("residual_n" + fmt(n), resid, "<=", num(p, "tol"), "bowl_residual.csv:residual");
    out.check("inequality_failures_n" + fmt(n), fails, "==", 0,
              "bowl_residual.csv:inequality_failures");
    plot.series.push_back(std::move(s));
  }
  out.tables = {res, prof};
  out.plots = {plot};
  return out;
}

// ---- fit-rigidity

ExperimentOutput run_fit_rigidity(const Json& p, std::uint64_t seed) {
  const int n = integer(p, "n");
  const double t = num(p, "t");
  ModelTag tag;
  tag.kind = ModelKind::Cylinder;
  tag.n = n;
  tag.t = t;
  GridSpec gs;
  gs.sphere_res = integer(p, "sphere_res");
  gs.z_res = integer(p, "z_res");
  SurfaceSampleSet s = sample_model(tag, gs, t);
  std::mt19937_64 g(seed);
  std::normal_distribution<double> N(0, 1);
  auto gens = complement_generators(n);
  Mat Pi = Mat::Zero(n + 1, n + 1);
  Pi(n - 1, n - 1) = Pi(n, n) = 1;
  const Mat I = Mat::Identity(n + 1, n + 1);
  Table tab{"fit_trials", {"trial", "tilt_norm", "q_error", "S_error", "defect", "iterations"}};
  std::vector<double> qe, se, de;
  for (int k = 0; k < integer(p, "trials"); ++k) {
    RotationFieldSet init = reference_fields(n);
    Mat X = Mat::Zero(n + 1, n + 1);
    for (const auto& G : gens) X += num(p, "tilt") * N(g) * G;
    init.S = antisym_exp(X);
    for (int i = 0; i <= n; ++i) init.q(i) = num(p, "offset") * N(g);
    FitResult r = fit_rotation_fields(s, init);
    const double eS = ((I - Pi) * r.fields.S * Pi).norm();
    const double eq = ((I - Pi) * r.fields.q).norm();
    qe.push_back(eq);
    se.push_back(eS);
    de.push_back(r.report.defect);
    tab.add({fmt(k), fmt(X.norm()), fmt(eq), fmt(eS), fmt(r.report.defect), fmt(r.iterations)});
  }
  ExperimentOutput out;
  out.tables = {tab};
  out.check("max_q_error", max_of(qe), "<=", num(p, "tol_q"), "fit_trials.csv:q_error");
  out.check("max_S_error", max_of(se), "<=", num(p, "tol_S"), "fit_trials.csv:S_error");
  out.check("max_defect", max_of(de), "<=", num(p, "tol_defect"), "fit_trials.csv:defect");
  return out;
}

// ---- align-constant

RotationFieldSet eps_fields(std::mt19937_64& g, int n, double eps, const SurfaceSampleSet& s) {
  std::normal_distribution<double> N(0, 1);
  Mat X = Mat::Zero(n + 1, n + 1);
  for (const auto& G : complement_generators(n)) X += N(g) * G;
  Vec q = Vec::Zero(n + 1);
  for (int i = 0; i < n - 1; ++i) q(i) = N(g);
  auto make = [&](double a) {
    RotationFieldSet f = reference_fields(n);
    f.S = antisym_exp(a * X);
    f.q = a * q;
    return f;
  };
  double a = 1e-3;
  for (int it = 0; it < 4; ++it) a *= eps / symmetry_defect(make(a), s).defect;
  return make(a);
}

ExperimentOutput run_align_constant(const Json& p, std::uint64_t seed) {
  const int n = integer(p, "n");
  const double t = num(p, "t"), eps = num(p, "eps");
  const auto Ls = nums(p, "L_values");
  const double H = cylinder_H(n, t);
  ModelTag tag;
  tag.kind = ModelKind::Cylinder;
  tag.n = n;
  tag.t = t;
  GridSpec gs;
  gs.sphere_res = integer(p, "sphere_res");
  gs.z_res = integer(p, "z_res");
  gs.z_extent = max_of(Ls) / H + 1;
  SurfaceSampleSet s = sample_model(tag, gs, t);
  Vec center = Vec::Zero(n + 1);
  center(0) = cylinder_radius(n, t);

  std::mt19937_64 g(seed);
  Table pairs{"align_pairs", {"pair", "L", "defect1", "defect2", "residual", "identity_residual",
                              "residual_over_L_eps"}};
  std::vector<double> C(Ls.size(), 0.0);
  for (int k = 0; k < integer(p, "pairs"); ++k) {
    RotationFieldSet K1 = eps_fields(g, n, eps, s);
    RotationFieldSet K2 = eps_fields(g, n, eps, s);
    Mat B = Mat::Identity(n + 1, n + 1);
    B.topLeftCorner(n - 1, n - 1) = random_rotation(g, n - 1);
    K2.S = K2.S * B;
    const double d1 = symmetry_defect(K1, s).defect, d2 = symmetry_defect(K2, s).defect;
    for (std::size_t i = 0; i < Ls.size(); ++i) {
      Alignment a = align_field_sets(K1, K2, center, Ls[i] / H, H, s);
      const double ratio = a.residual / (Ls[i] * eps);
      C[i] = std::max(C[i], ratio);
      pairs.add({fmt(k), fmt(Ls[i]), fmt(d1), fmt(d2), fmt(a.residual), fmt(a.identity_residual),
                 fmt(ratio)});
    }
  }
  Table consts{"align_constant", {"L", "C_L"}};
  for (std::size_t i = 0; i < Ls.size(); ++i) consts.add({fmt(Ls[i]), fmt(C[i])});

  SymmetryReport ref = symmetry_defect(reference_fields(n), s);
  Table remark{"step1_remark",
               {"n", "observed_sup", "stated", "observed_over_stated", "reference_defect"}};
  remark.add({fmt(n), fmt(ref.magnitude), fmt(n - 2.0), fmt(ref.magnitude / (n - 2.0)),
              fmt(ref.defect)});

  ExperimentOutput out;
  out.tables = {consts, pairs, remark};
  out.check("C", max_of(C), "finite", 0, "align_constant.csv:C_L");
  out.check("reference_defect", ref.defect, "<=", 1e-12, "step1_remark.csv:reference_defect");
  Plot pl{"align_constant", "Alignment constant", "L", "C_L", false, false,
          {{"C_L", Ls, C, true}}};
  out.plots = {pl};
  return out;
}

// ---- mode-decay

ExperimentOutput run_mode_decay(const Json& p, std::uint64_t) {
  const int n = integer(p, "n"), l = integer(p, "level");
  const double lambda = l * (l + n - 3.0);
  const double expected = 1 - lambda / (2.0 * (n - 2));
  const double t0 = num(p, "t0"), t1 = num(p, "t1");
  EvolveOptions o;
  o.N = integer(p, "N");
  o.dt_rel = num(p, "dt_rel");
  const int rec = integer(p, "records");
  for (int i = 0; i < rec; ++i) o.record.push_back(-std::pow(-t0, 1 - i / (rec - 1.0)) * std::pow(-t1, i / (rec - 1.0)));
  auto env = [](double, double, double t) { return std::sqrt(-t); };
  ModeRun run = evolve_mode(n, lambda, num(p, "L"), env, env, t0, t1, o);
  Table trace{"mode_trace", {"t", "vhat_center", "v_center"}};
  std::vector<double> ts, ys;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    const double vh = run.vhat(k)(o.N, o.N);
    ts.push_back(run.times[k]);
    ys.push_back(vh);
    trace.add({fmt(run.times[k]), fmt(vh), fmt(run.v[k](o.N, o.N))});
  }
  const double ex = fit_time_exponent(ts, ys);
  const double rel = std::abs(ex - expected) / std::abs(expected);
  Table fit{"mode_fit", {"n", "level", "lambda", "exponent", "expected", "rel_error"}};
  fit.add({fmt(n), fmt(l), fmt(lambda), fmt(ex), fmt(expected), fmt(rel)});

  DecayConfig dc;
  dc.n = n;
  dc.l_min = integer(p, "sweep_l_min");
  dc.l_max = integer(p, "sweep_l_max");
  dc.N = integer(p, "sweep_N");
  dc.dt_rel = num(p, "sweep_dt_rel");
  dc.core_R = num(p, "core_R");
  for (double e : nums(p, "L0_exponents")) dc.L0.push_back(std::pow(2.0, e) * std::pow(n, 2.5));
  DecayReport dr = mode_decay_sweep(dc);
  Table rows{"decay_rows", {"L0", "level", "multiplicity", "sup"}};
  for (const auto& r : dr.rows) rows.add({fmt(r.L0), fmt(r.level), fmt(r.multiplicity), fmt(r.sup)});
  Table agg{"decay_aggregate", {"L0", "aggregate"}};
  for (std::size_t i = 0; i < dr.L0.size(); ++i) agg.add({fmt(dr.L0[i]), fmt(dr.aggregate[i])});
  Table pw{"decay_power", {"power", "bound"}};
  const double bound = -1.0 / (n - 2) + 0.1;
  pw.add({fmt(dr.power), fmt(bound)});

  ExperimentOutput out;
  out.tables = {fit, trace, pw, agg, rows};
  out.check("exponent_rel_error", rel, "<=", num(p, "exponent_tol"), "mode_fit.csv:rel_error");
  out.check("aggregate_power", dr.power, "<=", bound, "decay_power.csv:power");
  out.plots = {{"mode_trace", "Gauged mode amplitude", "-t", "vhat", true, true,
                {{"vhat", [&] {
                    std::vector<double> m;
                    for (double t : ts) m.push_back(-t);
                    return m;
                  }(), ys, true}}},
               {"decay_aggregate", "Aggregate higher-mode sup", "L0", "aggregate", true, true,
                {{"aggregate", dr.L0, dr.aggregate, true}}}};
  return out;
}

// ---- kernel-oracle

double sine_series(double x, double y, double L, double t, int terms) {
  double s = 0;
  for (int k = 1; k <= terms; ++k) {
    const double a = k * kPi / (2 * L);
    const double e = std::exp(-a * a * t);
    if (e < 1e-300) break;
    s += std::sin(a * (x + L)) * std::sin(a * (y + L)) * e;
  }
  return s / L;
}

ExperimentOutput run_kernel_oracle(const Json& p, std::uint64_t seed) {
  const double L = num(p, "L");
  const int terms = integer(p, "series_terms");
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> U(-L, L);
  std::uniform_real_distribution<double> LT(std::log(num(p, "t_min")), std::log(num(p, "t_max")));
  ImageKernel k{L};
  Table q{"oracle_queries", {"query", "x1", "x2", "y1", "y2", "t", "images", "series", "abs_diff"}};
  double worst = 0;
  for (int i = 0; i < integer(p, "queries"); ++i) {
    const double x1 = U(g), x2 = U(g), y1 = U(g), y2 = U(g), t = std::exp(LT(g));
    const double a = eval_dirichlet_kernel(k, x1, x2, y1, y2, t).value;
    const double b = sine_series(x1, y1, L, t, terms) * sine_series(x2, y2, L, t, terms);
    worst = std::max(worst, std::abs(a - b));
    q.add({fmt(i), fmt(x1), fmt(x2), fmt(y1), fmt(y2), fmt(t), fmt(a), fmt(b), fmt(std::abs(a - b))});
  }
  Table sum{"oracle_summary", {"max_abs_diff", "tol"}};
  sum.add({fmt(worst), fmt(num(p, "tol"))});
  ExperimentOutput out;
  out.tables = {sum, q};
  out.check("max_abs_diff", worst, "<=", num(p, "tol"), "oracle_summary.csv:max_abs_diff");
  return out;
}

// ---- flux-bound

ExperimentOutput run_flux_bound(const Json& p, std::uint64_t) {
  Table fl{"flux_rows", {"L", "x1", "x2", "s", "flux", "error", "C50", "C1000"}};
  Table fc{"flux_constants", {"L", "C50", "C1000"}};
  double C50 = 0;
  std::vector<double> c1000;
  Plot plot{"flux_envelope", "Boundary flux times s^2/L^2", "s/L^2", "flux s^2/L^2", true, true, {}};
  for (double Lf : nums(p, "flux_L")) {
    std::vector<double> s;
    for (double r : nums(p, "flux_s_rel")) s.push_back(r * Lf * Lf);
    FluxSweep sw = flux_sweep(Lf, s);
    Series se{"L=" + fmt(Lf), {}, {}, true};
    for (const auto& r : sw.rows) {
      fl.add({fmt(r.L), fmt(r.x1), fmt(r.x2), fmt(r.s), fmt(r.v.flux), fmt(r.v.error), fmt(r.v.C50),
              fmt(r.v.C1000)});
      se.x.push_back(r.s / (Lf * Lf));
      se.y.push_back(r.v.flux * r.s * r.s / (Lf * Lf));
    }
    fc.add({fmt(Lf), fmt(sw.C50), fmt(sw.C1000)});
    c1000.push_back(sw.C1000);
    C50 = std::max(C50, sw.C50);
    plot.series.push_back(std::move(se));
  }
  ExperimentOutput out;
  out.tables = {fc, fl};
  out.check("flux_C50", C50, "finite", 0, "flux_constants.csv:C50");
  out.check("flux_C1000", max_of(c1000), "finite", 0, "flux_constants.csv:C1000");
  out.plots = {plot};
  return out;
}

// ---- improvement-sweep

ExperimentOutput run_improvement(const Json& p, std::uint64_t) {
  const int n = integer(p, "n");
  Table tab{"improvement", {"level", "L0", "amplitude", "defect_before", "defect_after", "factor",
                            "b_norm", "P_norm", "magnitude_after"}};
  ExperimentOutput out;
  Plot plot{"improvement", "Improvement factor", "L0", "factor", true, true, {}};
  for (double ld : nums(p, "levels")) {
    std::vector<double> L0s, fac;
    int increases = 0;
    for (double e : nums(p, "L0_exponents")) {
      ImprovementConfig c;
      c.n = n;
      c.level = static_cast<int>(ld);
      c.L0 = std::pow(2.0, e) * std::pow(n, 2.5);
      c.eps = num(p, "eps");
      c.core_R = num(p, "core_R");
      c.N = integer(p, "N");
      c.dt_rel = num(p, "dt_rel");
      ImprovementResult r = improvement_experiment(c);
      if (!fac.empty() && r.factor > fac.back()) ++increases;
      L0s.push_back(c.L0);
      fac.push_back(r.factor);
      tab.add({fmt(c.level), fmt(c.L0), fmt(r.amplitude), fmt(r.defect_before), fmt(r.defect_after),
               fmt(r.factor), fmt(r.b_norm), fmt(r.P_norm), fmt(r.magnitude_after)});
    }
    const std::string l = fmt(static_cast<int>(ld));
    out.check("factor_increases_l" + l, increases, "==", 0, "improvement.csv:factor");
    out.check("factor_largest_L0_l" + l, fac.back(), "<=", 0.5, "improvement.csv:factor");
    plot.series.push_back({"l=" + l, L0s, fac, false});
  }
  out.tables = {tab};
  out.plots = {plot};
  return out;
}

// ---- barrier-sweep

ExperimentOutput run_barrier(const Json& p, std::uint64_t) {
  BarrierConfig c;
  c.n = integer(p, "n");
  c.Lambda1 = num(p, "Lambda1");
  c.c_n = num(p, "c_n");
  c.eps = num(p, "eps");
  c.j_first = integer(p, "j_first");
  c.j_step = integer(p, "j_step");
  c.j_count = integer(p, "j_count");
  c.grid.radial = integer(p, "grid_radial");
  c.grid.sphere_res = integer(p, "grid_sphere_res");
  c.grid.split = integer(p, "grid_split");
  c.grid.time = integer(p, "grid_time");
  BarrierSweep sw = barrier_sweep(c);

  Table th{"barrier_thresholds", {"n", "Lambda1", "c_n", "j1", "slope_scan", "slope_analytic"}};
  th.add({fmt(sw.n), fmt(c.Lambda1), fmt(sw.c_n), fmt(sw.thresholds.j1),
          fmt(sw.thresholds.slope_scan), fmt(sw.thresholds.slope_analytic)});
  Table rows{"barrier_rows", {"j", "D", "W", "lambda", "mu", "coefficient_max", "trivial_pass",
                              "field_pass", "log_interior", "log_lateral", "log_split",
                              "log_initial", "log2_final", "scale"}};
  double cmax = -std::numeric_limits<double>::infinity();
  int mp_fail = 0;
  std::vector<double> js, lat;
  for (const auto& r : sw.rows) {
    rows.add({fmt(r.j), fmt(r.params.D), fmt(r.params.W), fmt(r.params.lambda), fmt(r.params.mu),
              fmt(r.coefficient_max), fmt(r.trivial.pass), fmt(r.field.pass),
              fmt(r.field.interior), fmt(r.field.lateral), fmt(r.field.split),
              fmt(r.field.initial), fmt(r.log2_final), fmt(r.scale)});
    cmax = std::max(cmax, r.coefficient_max);
    mp_fail += !r.trivial.pass + !r.field.pass;
    js.push_back(r.j);
    lat.push_back(r.field.lateral / std::log(2.0));
  }
  Table sl{"barrier_slopes", {"piece", "slope", "claimed", "two_sided_rel_error", "one_sided_pass"}};
  ExperimentOutput out;
  struct P {
    const char* name;
    double slope, claimed;
  };
  for (P q : {P{"lateral", sw.slope_lateral, -0.5}, P{"split", sw.slope_split, -0.2},
              P{"initial", sw.slope_initial, -1.0}, P{"final", sw.slope_final, -0.2}}) {
    const bool one = q.slope <= 0.8 * q.claimed;
    sl.add({q.name, fmt(q.slope), fmt(q.claimed), fmt(std::abs(q.slope / q.claimed - 1)), fmt(one)});
    out.check(std::string("slope_") + q.name, q.slope, "<=", 0.8 * q.claimed,
              "barrier_slopes.csv:slope");
  }
  out.tables = {th, rows, sl};
  out.check("coefficient_max", cmax, "<", 0, "barrier_rows.csv:coefficient_max");
  out.check("max_principle_failures", mp_fail, "==", 0, "barrier_rows.csv:field_pass");
  out.plots = {{"barrier_lateral", "log2 sup on lateral boundary", "j", "log2 sup", false, false,
                {{"lateral", js, lat, true}}}};
  return out;
}

// ---- translator-step3

ExperimentOutput run_step3(const Json& p, std::uint64_t) {
  const int n = integer(p, "n");
  const double Lambda = num(p, "Lambda");
  const auto jv = nums(p, "j_values");
  const double jmax = max_of(jv);
  BowlProfile prof = solve_bowl_profile(
      n, std::sqrt(2.0 * (n - 1) * std::pow(2.0, jmax / 100) * Lambda) * 1.2 + 10, 1e-10);
  RegionGridSpec g;
  g.radial = integer(p, "grid_radial");
  g.sphere_res = integer(p, "grid_sphere_res");
  g.time = integer(p, "grid_time");
  Table rows{"step3_rows", {"j", "lambda_j", "c_j", "identity", "coefficient_max", "min_H_over_ncj",
                            "sup_lateral", "sup_initial", "sup_all", "bound", "pass"}};
  int fails = 0;
  for (double jd : jv) {
    Step3Report r = translator_step3_barrier(static_cast<int>(jd), Lambda, prof, num(p, "eps1"), g);
    rows.add({fmt(r.j), fmt(r.lambda_j), fmt(r.c_j), fmt(r.identity), fmt(r.coefficient_max),
              fmt(r.min_H_over_ncj), fmt(r.sup_lateral), fmt(r.sup_initial), fmt(r.sup_all),
              fmt(r.bound), fmt(r.pass)});
    fails += !r.pass;
  }
  double id_max = -std::numeric_limits<double>::infinity();
  const int scan = integer(p, "identity_scan_max");
  for (int j = 0; j <= scan; ++j)
    id_max = std::max(id_max, std::pow(2.0, -j / 50.0) - 2 * std::pow(2.0, -j / 100.0) * std::pow(2.0, -j / 100.0));
  int valid = -1;
  for (int j = 0; j <= static_cast<int>(jmax); j += 10) {
    try {
      translator_step3_barrier(j, Lambda, prof, 1.0, {4, 1, 0, 2});
      valid = j;
      break;
    } catch (const RegionValidityError&) {
    }
  }
  Table th{"step3_thresholds", {"identity_max", "identity_scan_max", "slab_threshold", "first_valid_j"}};
  th.add({fmt(id_max), fmt(scan), fmt(step3_slab_threshold(4000)), fmt(valid)});
  ExperimentOutput out;
  out.tables = {th, rows};
  out.check("identity_max", id_max, "<", 0, "step3_thresholds.csv:identity_max");
  out.check("row_failures", fails, "==", 0, "step3_rows.csv:pass");
  return out;
}

// ---- diameters

ExperimentOutput run_diameters(const Json& p, std::uint64_t seed) {
  ExperimentOutput out;
  Table sph{"sphere_diameters", {"subdiv", "steiner", "nodes", "d1", "d2", "ratio", "ratio_over_half_pi"}};
  double sphere_err = 0;
  for (int sd = 1; sd <= integer(p, "sphere_subdiv"); ++sd) {
    DiameterReport r = diameters(icosphere(sd), {integer(p, "sphere_steiner"), true});
    const double q = r.ratio / (kPi / 2);
    sph.add({fmt(sd), fmt(integer(p, "sphere_steiner")), fmt(r.nodes), fmt(r.d1), fmt(r.d2),
             fmt(r.ratio), fmt(q)});
    sphere_err = std::abs(q - 1);
  }
  std::mt19937_64 g(seed);
  std::uniform_real_distribution<double> A(1, num(p, "max_aspect"));
  Table rnd{"random_diameters", {"mesh", "a1", "a2", "a3", "d1", "d2", "ratio"}};
  const TriMesh base = icosphere(integer(p, "subdiv"));
  double worst = 0;
  Series sc{"ellipsoids", {}, {}, true};
  for (int i = 0; i < integer(p, "meshes"); ++i) {
    Vec3 ax(1, A(g), A(g));
    TriMesh m = scaled(base, ax, random_rotation(g, 3));
    DiameterReport r = diameters(m, {integer(p, "steiner"), true});
    worst = std::max(worst, r.ratio);
    rnd.add({fmt(i), fmt(ax(0)), fmt(ax(1)), fmt(ax(2)), fmt(r.d1), fmt(r.d2), fmt(r.ratio)});
    sc.x.push_back(std::max(ax(1), ax(2)));
    sc.y.push_back(r.ratio);
  }
  bool flat_rejected = false;
  try {
    diameters(scaled(base, Vec3(1, 1, 0)));
  } catch (const PreconditionError&) {
    flat_rejected = true;
  }

  const int n = integer(p, "n");
  Table ecc{"eccentricity", {"shape", "n", "R", "ecc", "reference"}};
  double round_err = 0;
  for (double R : {0.5, 1.0, 3.0}) {
    const double e = eccentricity(round_sphere_points(n, R, 6));
    ecc.add({"round_sphere", fmt(n), fmt(R), fmt(e), fmt(2.0 * (n - 2))});
    round_err = std::max(round_err, std::abs(e - 2.0 * (n - 2)));
  }
  double cyl_slack = std::numeric_limits<double>::infinity();
  for (double R : {2.0, 4.0, 8.0, 16.0}) {
    const double e = eccentricity(cylinder_cross_section(n, R, 4, 33));
    const double lower = std::sqrt((n - 2) / 2.0) * R;
    ecc.add({"cylinder_section", fmt(n), fmt(R), fmt(e), fmt(lower)});
    cyl_slack = std::min(cyl_slack, e - lower);
  }

  Table cone{"cone_containment", {"n", "r_min", "eta", "contained", "margin", "tested"}};
  int cone_fail = 0;
  for (int bn = 2; bn <= 4; ++bn) {
    BowlProfile b = solve_bowl_profile(bn, 50, 1e-10);
    for (double rmin : {2.0, 5.0, 10.0}) {
      std::vector<Vec> pts;
      for (std::size_t i = 0; i < b.r.size(); ++i) {
        if (b.r[i] < rmin) continue;
        for (int s : {-1, 1}) {
          Vec x = Vec::Zero(bn + 1);
          x(0) = s * b.r[i];
          x(bn) = b.phi[i];
          pts.push_back(x);
        }
      }
      const double eta = rmin / (2.0 * bn);
      ConeReport r = cone_containment(pts, eta, Vec::Zero(bn + 1), Vec::Unit(bn + 1, bn));
      cone_fail += !r.contained;
      cone.add({fmt(bn), fmt(rmin), fmt(eta), fmt(r.contained), fmt(r.margin), fmt(r.tested)});
    }
  }

  Table sum{"diameter_summary", {"max_ratio", "sphere_rel_error", "flat_rejected"}};
  sum.add({fmt(worst), fmt(sphere_err), fmt(flat_rejected)});
  out.tables = {sum, sph, rnd, ecc, cone};
  out.check("max_ratio", worst, "<=", 3.0, "diameter_summary.csv:max_ratio");
  out.check("sphere_rel_error", sphere_err, "<=", num(p, "sphere_tol"),
            "diameter_summary.csv:sphere_rel_error");
  out.check("flat_rejected", flat_rejected, "==", 1, "diameter_summary.csv:flat_rejected");
  out.check("round_ecc_error", round_err, "<=", 1e-10, "eccentricity.csv:ecc");
  out.check("cylinder_ecc_slack", cyl_slack, ">=", 0, "eccentricity.csv:ecc");
  out.check("cone_failures", cone_fail, "==", 0, "cone_containment.csv:contained");
  out.plots = {{"random_diameters", "d1/d2 on random ellipsoids", "largest axis", "d1/d2", false,
                false, {sc}}};
  return out;
}

// ---- density-table

ExperimentOutput run_density(const Json& p, std::uint64_t) {
  const int n = integer(p, "n");
  auto rows = density_table(n);
  Table t{"density", {"k", "n", "theta", "error", "exact"}};
  double exact_err = 0;
  for (const auto& r : rows) {
    t.add({fmt(r.k), fmt(r.n), fmt(r.value), fmt(r.error), fmt(r.exact)});
    exact_err = std::max(exact_err, std::abs(r.value - r.exact));
  }
  Table gaps{"density_gaps", {"k1", "k2", "gap", "ten_times_error", "distinct"}};
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = a + 1; b < rows.size(); ++b) {
      const double gap = std::abs(rows[a].value - rows[b].value);
      const double e = 10 * std::max(rows[a].error, rows[b].error);
      min_ratio = std::min(min_ratio, gap / e);
      gaps.add({fmt(rows[a].k), fmt(rows[b].k), fmt(gap), fmt(e), fmt(gap > e)});
    }
  DensityQuery q;
  q.x0 = Vec::Zero(n + 1);
  const double plane = gaussian_density(hyperplane_points(n, integer(p, "plane_nodes"), 14), q).value;

  Table hm{"height_monotonicity", {"model", "applicable", "violation", "tip_rate"}};
  BowlProfile b = solve_bowl_profile(n, 50, 1e-10);
  ModelTag tag;
  tag.kind = ModelKind::Bowl;
  tag.n = n;
  auto tr = bowl_trajectories(b, {0.0, 0.5, 2, 8, 20}, Vec::Unit(n, 0), 0, 2, 400);
  HeightReport h = height_monotonicity(tag, tr);
  hm.add({tag.name(), fmt(h.applicable), fmt(h.violation), fmt(h.tip_rate)});
  ModelTag cyl;
  cyl.kind = ModelKind::Cylinder;
  cyl.n = n;
  HeightReport hc = height_monotonicity(cyl, tr);
  hm.add({cyl.name(), fmt(hc.applicable), fmt(hc.violation), fmt(hc.tip_rate)});

  Table sum{"density_summary", {"min_gap_over_ten_error", "plane_error", "exact_error"}};
  sum.add({fmt(min_ratio), fmt(std::abs(plane - 1)), fmt(exact_err)});
  ExperimentOutput out;
  out.tables = {sum, t, gaps, hm};
  out.check("min_gap_over_ten_error", min_ratio, ">", 1, "density_summary.csv:min_gap_over_ten_error");
  out.check("plane_error", std::abs(plane - 1), "<=", 1e-10, "density_summary.csv:plane_error");
  out.check("exact_error", exact_err, "<=", 1e-9, "density_summary.csv:exact_error");
  out.check("height_violation", h.violation, "<=", 1e-8, "height_monotonicity.csv:violation");
  out.check("tip_rate", h.tip_rate, "<=", 1e-12, "height_monotonicity.csv:tip_rate");
  return out;
}

std::vector<ExperimentDef> build_registry() {
  std::vector<ExperimentDef> r;
  r.push_back({"bowl-profile", "Bowl ODE profiles and their inequalities", 1,
               [] { return Json{{"seed", 1}, {"n_values", {3, 4, 5}}, {"r_max", 50.0}, {"tol", 1e-10}}; },
               run_bowl_profile});
  r.push_back({"fit-rigidity", "Rotation-field fit on an exact cylinder from tilted starts", 30,
               [] {
                 return Json{{"seed", 1},     {"n", 4},          {"t", -1.0},       {"trials", 20},
                             {"tilt", 0.2},   {"offset", 0.3},   {"sphere_res", 6}, {"z_res", 9},
                             {"tol_q", 1e-6}, {"tol_S", 1e-6},   {"tol_defect", 1e-8}};
               },
               run_fit_rigidity});
  r.push_back({"align-constant", "Alignment residual of eps-symmetric field pairs", 120,
               [] {
                 return Json{{"seed", 1},  {"n", 4},         {"t", -1.0},
                             {"pairs", 100}, {"eps", 1e-3},  {"L_values", {1, 5, 10}},
                             {"sphere_res", 4}, {"z_res", 21}};
               },
               run_align_constant});
  r.push_back({"mode-decay", "Jacobi mode decay on the cylinder", 120,
               [] {
                 return Json{{"seed", 1},          {"n", 4},
                             {"level", 2},         {"t0", -100.0},
                             {"t1", -1.0},         {"L", 0.5},
                             {"N", 32},            {"dt_rel", 0.01},
                             {"records", 11},      {"exponent_tol", 0.05},
                             {"sweep_l_min", 2},   {"sweep_l_max", 8},
                             {"sweep_N", 48},      {"sweep_dt_rel", 0.05},
                             {"core_R", 5.0},      {"L0_exponents", {4, 5, 6, 7}}};
               },
               run_mode_decay});
  r.push_back({"kernel-oracle", "Image-sum Dirichlet kernel against the sine series", 60,
               [] {
                 return Json{{"seed", 1},          {"L", 4.0},
                             {"queries", 1000},    {"t_min", 0.01},
                             {"t_max", 16.0},      {"series_terms", 4000},
                             {"tol", 1e-8}};
               },
               run_kernel_oracle});
  r.push_back({"flux-bound", "Boundary flux of the Dirichlet kernel against its envelope", 60,
               [] {
                 return Json{{"seed", 1}, {"flux_L", {4, 8}},
                             {"flux_s_rel", {1.0 / 32, 1.0 / 16, 1.0 / 8, 1.0 / 4, 1.0 / 2}}};
               },
               run_flux_bound});
  r.push_back({"improvement-sweep", "Neck improvement factor against L0", 600,
               [] {
                 return Json{{"seed", 1},   {"n", 4},        {"levels", {1, 2}},
                             {"L0_exponents", {4, 5, 6, 7}}, {"eps", 1e-10},
                             {"core_R", 5.0}, {"N", 48},     {"dt_rel", 0.05}};
               },
               run_improvement});
  r.push_back({"barrier-sweep", "Barrier coefficient and maximum principle on Bowl x R", 300,
               [] {
                 return Json{{"seed", 1},         {"n", 4},           {"Lambda1", 10.0},
                             {"c_n", 0.0},        {"eps", 1.0},       {"j_first", 0},
                             {"j_step", 25},      {"j_count", 9},     {"grid_radial", 32},
                             {"grid_sphere_res", 3}, {"grid_split", 20}, {"grid_time", 9}};
               },
               run_barrier});
  r.push_back({"translator-step3", "Translator step-3 barrier on Bowl", 300,
               [] {
                 return Json{{"seed", 1},        {"n", 4},
                             {"Lambda", 10.0},   {"eps1", 1.0},
                             {"j_values", {700, 750, 800, 850, 900}},
                             {"identity_scan_max", 4000},
                             {"grid_radial", 32}, {"grid_sphere_res", 3}, {"grid_time", 9}};
               },
               run_step3});
  r.push_back({"diameters", "Intrinsic and extrinsic diameters, eccentricity, cone containment", 180,
               [] {
                 return Json{{"seed", 1},        {"meshes", 1000},    {"subdiv", 2},
                             {"steiner", 1},     {"max_aspect", 20.0}, {"sphere_subdiv", 3},
                             {"sphere_steiner", 3}, {"sphere_tol", 0.02}, {"n", 4}};
               },
               run_diameters});
  r.push_back({"density-table", "Gaussian densities of generalized cylinders", 180,
               [] { return Json{{"seed", 1}, {"n", 4}, {"plane_nodes", 40}}; }, run_density});
  return r;
}

void check_type(const std::string& key, const Json& def, const Json& v) {
  auto bad = [&] { throw ConfigError("parameter " + key + " has the wrong type"); };
  if (v.is_object()) throw ConfigError("parameter " + key + " is nested; configs are flat");
  if (def.is_array()) {
    if (!v.is_array()) bad();
    for (const auto& e : v)
      if (!e.is_number()) bad();
  } else if (def.is_number_integer() || def.is_number_unsigned()) {
    if (!(v.is_number_integer() || v.is_number_unsigned())) bad();
  } else if (def.is_number()) {
    if (!v.is_number()) bad();
  } else if (def.type() != v.type()) {
    bad();
  }
}

std::string timestamp() {
  std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char b[32];
  std::strftime(b, sizeof b, "%Y%m%dT%H%M%SZ", &tm);
  return b;
}

}  // namespace

const std::vector<ExperimentDef>& experiment_registry() {
  static const std::vector<ExperimentDef> r = build_registry();
  return r;
}

const ExperimentDef* find_experiment(const std::string& name) {
  for (const auto& d : experiment_registry())
    if (d.name == name) return &d;
  return nullptr;
}

Json resolve_params(const ExperimentDef& def, const Json& config) {
  Json params = def.defaults();
  if (config.is_null()) return params;
  if (!config.is_object()) throw ConfigError("config must be a JSON object");
  const Json* src = &config;
  if (config.contains("parameters")) {
    if (config.contains("experiment") && config.at("experiment") != def.name)
      throw ConfigError("manifest belongs to experiment " + config.at("experiment").get<std::string>());
    src = &config.at("parameters");
    if (!src->is_object()) throw ConfigError("manifest parameters must be an object");
  }
  for (const auto& [k, v] : src->items()) {
    if (!params.contains(k)) throw ConfigError("unknown parameter " + k);
    check_type(k, params.at(k), v);
    params[k] = v;
  }
  return params;
}

RunResult run_experiment(const std::string& name, const RunOptions& opt) {
  RunResult res;
  const ExperimentDef* def = find_experiment(name);
  if (!def) {
    res.message = "unknown experiment " + name + "; registered:";
    for (const auto& d : experiment_registry()) res.message += " " + d.name;
    return res;
  }
  Json params;
  try {
    Json config;
    if (!opt.config_path.empty()) {
      try {
        config = Json::parse(read_file(opt.config_path));
      } catch (const Json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
      }
    }
    params = resolve_params(*def, config);
    if (opt.seed) params["seed"] = *opt.seed;
  } catch (const Error& e) {
    res.message = e.what();
    return res;
  }
  const std::uint64_t seed = params.at("seed").get<std::uint64_t>();

  fs::path dir = opt.out_dir.empty() ? fs::path(opt.out_base) / (name + "-" + timestamp())
                                     : fs::path(opt.out_dir);
  if (opt.out_dir.empty())
    for (int k = 2; fs::exists(dir); ++k)
      dir = fs::path(opt.out_base) / (name + "-" + timestamp() + "-" + std::to_string(k));
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    res.message = "cannot create " + dir.string();
    return res;
  }
  res.dir = dir.string();

  ExperimentOutput out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    out = def->run(params, seed);
  } catch (const Error& e) {
    res.message = name + " failed: " + e.what();
    return res;
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json artifacts = Json::array();
  for (const auto& t : out.tables) {
    write_csv(t, (dir / (t.name + ".csv")).string());
    artifacts.push_back(t.name + ".csv");
  }
  Table as{"assertions", {"name", "measured", "relation", "bound", "pass", "source"}};
  bool all = true;
  for (const auto& a : out.assertions) {
    as.add({a.name, fmt(a.measured), a.relation, fmt(a.bound), fmt(a.pass), a.source});
    all = all && a.pass;
  }
  write_csv(as, (dir / "assertions.csv").string());
  artifacts.push_back("assertions.csv");
  for (const auto& p : out.plots) {
    write_file((dir / (p.name + ".svg")).string(), render_svg(p));
    artifacts.push_back(p.name + ".svg");
  }
  Json manifest;
  manifest["experiment"] = name;
  manifest["description"] = def->description;
  manifest["tool_version"] = tool_version();
  manifest["seed"] = seed;
  manifest["parameters"] = params;
  manifest["artifacts"] = artifacts;
  manifest["wall_clock_budget_s"] = def->budget_s;
  manifest["wall_clock_s"] = res.seconds;
  manifest["created_utc"] = timestamp();
  write_file((dir / "manifest.json").string(), manifest.dump(2) + "\n");

  res.code = all ? 0 : 2;
  res.message = all ? "all assertions passed" : "assertion failure";
  return res;
}

ReportResult report(const std::string& dir) {
  ReportResult r;
  const fs::path d(dir);
  if (!fs::exists(d / "manifest.json")) {
    r.text = "no manifest.json in " + dir + "\n";
    return r;
  }
  Json manifest;
  Table as;
  try {
    manifest = Json::parse(read_file((d / "manifest.json").string()));
    as = read_csv((d / "assertions.csv").string());
  } catch (const std::exception& e) {
    r.text = std::string("unreadable artifacts: ") + e.what() + "\n";
    return r;
  }
  const std::size_t cn = as.column("name"), cm = as.column("measured"), cr = as.column("relation"),
                    cb = as.column("bound"), cp = as.column("pass"), cs = as.column("source");
  std::size_t w = 4;
  for (const auto& row : as.rows) w = std::max(w, row[cn].size());
  std::string text = "experiment: " + manifest.value("experiment", std::string("?")) + "\n";
  text += "seed: " + std::to_string(manifest.value("seed", std::uint64_t{0})) + "\n";
  int failed = 0;
  Json items = Json::array();
  for (const auto& row : as.rows) {
    const bool ok = row[cp] == "true";
    failed += !ok;
    std::string name = row[cn];
    name.resize(w, ' ');
    text += (ok ? "PASS  " : "FAIL  ") + name + "  " + row[cm] + " " + row[cr] + " " + row[cb] +
            "  [" + row[cs] + "]\n";
    items.push_back({{"name", row[cn]}, {"measured", row[cm]}, {"relation", row[cr]},
                     {"bound", row[cb]}, {"pass", ok}, {"source", row[cs]}});
  }
  text += std::to_string(as.rows.size() - failed) + "/" + std::to_string(as.rows.size()) +
          " assertions passed\n";
  r.summary = {{"experiment", manifest.value("experiment", std::string("?"))},
               {"passed", as.rows.size() - failed},
               {"failed", failed},
               {"assertions", items}};
  r.text = text;
  r.code = failed ? 2 : 0;
  return r;
}

}  // namespace rotsym
