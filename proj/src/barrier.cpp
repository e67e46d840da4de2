#include "rotsym/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rotsym/errors.hpp"
#include "rotsym/fields.hpp"
#include "rotsym/sphere.hpp"

namespace rotsym {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_cosh(double s) {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2 * a)) - std::log(2.0);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}

// radius where g(r) reaches `level` on the profile, g increasing
double solve_radius(const BowlProfile& prof, const std::function<double(double)>& g, double level) {
  double lo = 0, hi = prof.r_max();
  if (g(hi) < level) throw RangeError("bowl profile too short for the region");
  for (int it = 0; it < 200 && hi - lo > 1e-13 * hi; ++it) {
    double m = 0.5 * (lo + hi);
    (g(m) < level ? lo : hi) = m;
  }
  return hi;
}

struct ProfilePoint {
  double phi, w, H, A2, dphi;
};

ProfilePoint profile_point(const BowlProfile& prof, double r) {
  auto p = prof.at(r);
  const int d = prof.n;
  ProfilePoint o;
  o.phi = p.phi;
  o.dphi = p.dphi;
  o.w = std::sqrt(1 + p.dphi * p.dphi);
  o.H = 1.0 / o.w;
  const double radial = p.ddphi / (o.w * o.w * o.w);
  const double angular = r > 0 ? p.dphi / (r * o.w) : 1.0 / d;
  o.A2 = radial * radial + (d - 1) * angular * angular;
  return o;
}

}  // namespace

BarrierParams barrier_params(int n, int j, double Lambda1, double c_n) {
  if (!(c_n > 0 && c_n < 1)) throw DomainError("c_n must lie in (0, 1)");
  BarrierParams p;
  p.n = n;
  p.j = j;
  p.Lambda1 = Lambda1;
  p.c_n = c_n;
  p.D = std::pow(2.0, j / 100.0) * Lambda1;
  p.W = p.T = std::pow(2.0, j / 50.0) * Lambda1 * Lambda1;
  p.lambda = c_n * c_n / (n * p.D);
  p.mu = c_n / std::sqrt(p.D);
  return p;
}

double barrier_phi(const BarrierParams& p, double s, int deriv) {
  const double a = p.phi_scale * p.c_n * p.c_n / (p.n * p.D);
  if (deriv == 0) return a * log_cosh(s);
  if (deriv == 1) return a * std::tanh(s);
  const double sech = 1.0 / std::cosh(std::min(std::abs(s), 700.0));
  return a * sech * sech;
}

PhiReport phi_report(const BarrierParams& p) {
  PhiReport r;
  const double c = p.c_n, n = p.n;
  r.dphi_bound = c / n / std::sqrt(p.D);
  r.ddphi_bound = c * c / n / p.D;
  bool positive = true;
  for (int k = 0; k <= 4000; ++k) {
    const double u = k / 2000.0 - 1.0;
    const double s = p.W * u * u * u;
    r.sup_dphi = std::max(r.sup_dphi, std::abs(barrier_phi(p, s, 1)));
    r.sup_ddphi = std::max(r.sup_ddphi, std::abs(barrier_phi(p, s, 2)));
    if (s > 0 && !(barrier_phi(p, s, 1) > 0)) positive = false;
  }
  const double logsum = std::log(p.W + p.D + p.T);
  r.phi_W = barrier_phi(p, p.W);
  r.phi_W_bound = 20 * logsum;
  r.phi_core = barrier_phi(p, 200 * std::pow(n, 2.5));
  r.phi_core_bound = logsum;
  r.ok[0] = r.sup_dphi <= r.dphi_bound * (1 + 1e-12);
  r.ok[1] = r.sup_ddphi <= r.ddphi_bound * (1 + 1e-12);
  r.ok[2] = r.phi_W >= r.phi_W_bound;
  r.ok[3] = r.phi_core <= r.phi_core_bound;
  r.ok[4] = barrier_phi(p, 0.0) == 0.0 && positive;
  return r;
}

PhiThresholds phi_thresholds(int n, double Lambda1, double c_n, int j_max) {
  PhiThresholds t;
  int fail34 = 0, fail1 = 0;
  for (int j = 1; j <= j_max; ++j) {
    PhiReport r = phi_report(barrier_params(n, j, Lambda1, c_n));
    if (!(r.ok[2] && r.ok[3])) fail34 = j;
    if (!r.ok[0]) fail1 = j;
  }
  t.j1 = fail34 < j_max ? fail34 + 1 : -1;
  t.slope_scan = fail1 < j_max ? fail1 + 1 : -1;
  t.slope_analytic = std::max(1, static_cast<int>(std::ceil(100.0 * std::log2(c_n * c_n / Lambda1))));
  return t;
}

double measure_c_n(int n, double D_max) {
  const int d = n - 1;
  BowlProfile prof = solve_bowl_profile(d, std::sqrt(2.0 * (d - 1) * D_max) * 1.2 + 10, 1e-10);
  auto dist = [&](double r) { return std::hypot(r, prof.at(r).phi); };
  const double r1 = solve_radius(prof, dist, 1.0);
  const double r2 = solve_radius(prof, dist, D_max);
  double m = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 4000; ++k) {
    const double r = r1 * std::pow(r2 / r1, k / 4000.0);
    m = std::min(m, profile_point(prof, r).H * std::sqrt(dist(r)) / 2);
  }
  return 0.5 * m;
}

RegionSpec bowl_region(const BarrierParams& p, const BowlProfile& prof, const RegionGridSpec& g) {
  const int n = p.n;
  const int d = n - 1;
  if (prof.n != d) throw DomainError("region needs the Bowl^{n-1} profile");
  RegionSpec out;
  out.params = p;
  out.omega = Vec::Zero(n + 1);
  out.omega(n) = 1;
  auto dist = [&](double r) { return std::hypot(r, prof.at(r).phi); };
  const double rD = solve_radius(prof, dist, p.D);
  SphereGrid sg = make_sphere_grid(d - 1, g.sphere_res);
  std::vector<double> ys{0.0};
  for (int k = 0; k < g.split; ++k) {
    double y = std::pow(p.W, static_cast<double>(k) / (g.split - 1));
    ys.push_back(y);
    ys.push_back(-y);
  }
  std::vector<double> ts;
  for (int k = 0; k < g.time; ++k) ts.push_back(-1 - p.T + p.T * k / (g.time - 1));
  for (int i = 0; i < g.radial; ++i) {
    const double u = static_cast<double>(i) / (g.radial - 1);
    const double r = i == g.radial - 1 ? rD : rD * u * u;
    ProfilePoint pp = profile_point(prof, r);
    const double dd = std::hypot(r, pp.phi);
    const std::size_t m = i == 0 ? 1 : sg.size();
    for (std::size_t s = 0; s < m; ++s) {
      Vec th = i == 0 ? Vec::Unit(d, 0) : sg.points[s];
      for (double y : ys)
        for (std::size_t k = 0; k < ts.size(); ++k) {
          RegionSample q;
          q.x = Vec::Zero(n + 1);
          q.x.head(d) = r * th;
          q.x(d) = pp.phi + ts[k];
          q.x(n) = y;
          q.nu = Vec::Zero(n + 1);
          q.nu.head(d) = -pp.dphi / pp.w * th;
          q.nu(d) = 1 / pp.w;
          q.H = pp.H;
          q.A2 = pp.A2;
          q.dist = dd;
          q.t = ts[k];
          if (i == g.radial - 1)
            q.piece = Piece::Lateral;
          else if (std::abs(y) == p.W)
            q.piece = Piece::Split;
          else if (k == 0)
            q.piece = Piece::Initial;
          out.samples.push_back(std::move(q));
        }
    }
  }
  return out;
}

RegionSpec transform(const RegionSpec& r, const Mat& R, const Vec& b) {
  RegionSpec out = r;
  out.omega = R * r.omega;
  for (auto& s : out.samples) {
    s.x = R * s.x + b;
    s.nu = R * s.nu;
  }
  // Phi is measured from the transformed origin of the split axis
  for (auto& s : out.samples) s.x -= out.omega * out.omega.dot(b);
  return out;
}

CoefficientReport barrier_coefficient(const RegionSpec& r) {
  const BarrierParams& p = r.params;
  CoefficientReport rep;
  rep.max = -std::numeric_limits<double>::infinity();
  for (const auto& s : r.samples) {
    if (!(s.H > 2 * p.mu)) throw RegionValidityError("H <= 2 mu inside the region");
    const double sc = s.x.dot(r.omega);
    const double on = r.omega.dot(s.nu);
    const double wt2 = 1 - on * on;
    const double d1 = barrier_phi(p, sc, 1), d2 = barrier_phi(p, sc, 2);
    const double dt_phi = d1 * s.H * on;
    const double lap_phi = d1 * s.H * on + d2 * wt2;
    const double grad2 = d1 * d1 * wt2;
    const double c = p.lambda - p.mu * s.A2 / (s.H - p.mu) - dt_phi + lap_phi + grad2;
    rep.max = std::max(rep.max, c);
  }
  rep.count = r.samples.size();
  rep.negative = rep.max < 0;
  return rep;
}

JacobiField killing_jacobi(const Mat& B, const Vec& q) {
  return [B, q](const RegionSample& s) { return (B * (s.x - q)).dot(s.nu); };
}

JacobiField mean_curvature_jacobi() {
  return [](const RegionSample& s) { return s.H; };
}

double MaxPrincipleReport::boundary() const { return std::max({lateral, split, initial}); }

MaxPrincipleReport max_principle_check(const RegionSpec& r, const JacobiField& u, double tol) {
  const BarrierParams& p = r.params;
  MaxPrincipleReport rep;
  rep.interior = rep.lateral = rep.split = rep.initial = kNegInf;
  rep.tol = tol;
  for (const auto& s : r.samples) {
    if (!(s.H > p.mu)) throw RegionValidityError("H <= mu inside the region");
    const double v = std::abs(u(s));
    if (v == 0) continue;
    const double lf = -barrier_phi(p, s.x.dot(r.omega)) + p.lambda * (s.t - r.t_bar) +
                      std::log(v) - std::log(s.H - p.mu);
    double& slot = s.piece == Piece::Lateral ? rep.lateral
                   : s.piece == Piece::Split ? rep.split
                   : s.piece == Piece::Initial ? rep.initial
                                               : rep.interior;
    slot = std::max(slot, lf);
  }
  rep.pass = rep.interior <= rep.boundary() + std::log1p(tol);
  return rep;
}

BarrierSweep barrier_sweep(const BarrierConfig& cfg) {
  BarrierSweep out;
  out.n = cfg.n;
  const int n = cfg.n;
  out.c_n = cfg.c_n > 0 ? cfg.c_n : measure_c_n(n, 1e5);
  out.thresholds = phi_thresholds(n, cfg.Lambda1, out.c_n);
  const int j0 = cfg.j_first > 0 ? cfg.j_first : out.thresholds.j1;
  if (j0 < 1) throw RangeError("no feasible j for the barrier profile");
  const int jl = j0 + cfg.j_step * (cfg.j_count - 1);
  const double Dmax = barrier_params(n, jl, cfg.Lambda1, out.c_n).D;
  BowlProfile prof = solve_bowl_profile(n - 1, std::sqrt(2.0 * (n - 2) * Dmax) * 1.2 + 10, 1e-10);

  Mat G = Mat::Zero(n + 1, n + 1);
  G(0, n) = -1;
  G(n, 0) = 1;
  const Mat S = antisym_exp(1e-3 * G);
  const Mat B = S * standard_so_basis(n).J[0] * S.transpose();
  const Vec q = 1e-3 * Vec::Unit(n + 1, 0);
  JacobiField base = killing_jacobi(B, q);
  const double core = 200 * std::pow(n, 2.5);
  const double core_t = -2e4 * std::pow(n, 5);

  out.rows.resize(cfg.j_count);
  configure_threads();
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < cfg.j_count; ++k) {
    BarrierRow& row = out.rows[k];
    row.j = j0 + cfg.j_step * k;
    row.params = barrier_params(n, row.j, cfg.Lambda1, out.c_n);
    RegionSpec reg = bowl_region(row.params, prof, cfg.grid);
    row.coefficient_max = barrier_coefficient(reg).max;
    row.trivial = max_principle_check(reg, mean_curvature_jacobi());
    double lat = 0, fin = 0;
    for (const auto& s : reg.samples) {
      const double v = std::abs(base(s)) * s.H;
      if (s.piece == Piece::Lateral) lat = std::max(lat, v);
      if (s.dist <= core && std::abs(s.x(n)) <= core && s.t >= core_t) fin = std::max(fin, v);
    }
    const auto& P = row.params;
    const double target = std::log(std::pow(P.W + P.D + P.T, 2) * cfg.eps) - row.j * std::log(2.0);
    const double ls = target - std::log(lat);
    row.scale = std::exp(ls);
    row.field = max_principle_check(reg, base);
    for (double* v : {&row.field.interior, &row.field.lateral, &row.field.split, &row.field.initial})
      *v += ls;
    row.log2_final = fin > 0 ? (std::log(fin) + ls) / std::log(2.0) : std::nan("");
  }
  std::vector<double> js, a, b, c, f;
  for (const auto& r : out.rows) {
    js.push_back(r.j);
    a.push_back(r.field.lateral / std::log(2.0));
    b.push_back(r.field.split / std::log(2.0));
    c.push_back(r.field.initial / std::log(2.0));
    f.push_back(r.log2_final);
  }
  out.slope_lateral = slope(js, a);
  out.slope_split = slope(js, b);
  out.slope_initial = slope(js, c);
  out.slope_final = slope(js, f);
  return out;
}

Step3Report translator_step3_barrier(int j, double Lambda, const BowlProfile& prof, double eps1,
                                     const RegionGridSpec& g) {
  const int n = prof.n;
  Step3Report rep;
  rep.j = j;
  rep.lambda_j = std::pow(2.0, -j / 50.0);
  rep.c_j = std::pow(2.0, -j / 100.0);
  rep.identity = rep.lambda_j - 2 * rep.c_j * rep.c_j;
  rep.bound = std::pow(2.0, -j / 4.0);
  const double hmax = std::pow(2.0, j / 100.0) * Lambda;
  const double tdepth = std::pow(2.0, j / 100.0);
  const double rh = solve_radius(prof, [&](double r) { return prof.at(r).phi; }, hmax);
  SphereGrid sg = make_sphere_grid(n - 1, g.sphere_res);

  struct Pt {
    double H, A2, u, t;
    Piece piece;
  };
  std::vector<Pt> pts;
  double lat = 0;
  rep.min_H_over_ncj = std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.radial; ++i) {
    const double s = static_cast<double>(i) / (g.radial - 1);
    const double r = i == g.radial - 1 ? rh : rh * s * s;
    ProfilePoint pp = profile_point(prof, r);
    rep.min_H_over_ncj = std::min(rep.min_H_over_ncj, pp.H / (n * rep.c_j));
    const std::size_t m = i == 0 ? 1 : sg.size();
    for (std::size_t a = 0; a < m; ++a) {
      Vec th = i == 0 ? Vec::Unit(n, 0) : sg.points[a];
      const double u = -pp.dphi / pp.w * th(0);
      for (int k = 0; k < g.time; ++k) {
        const double t = -tdepth + tdepth * k / (g.time - 1);
        Piece pc = i == g.radial - 1 ? Piece::Lateral : k == 0 ? Piece::Initial : Piece::Interior;
        pts.push_back({pp.H, pp.A2, u, t, pc});
        if (pc == Piece::Lateral) lat = std::max(lat, std::abs(u) * pp.H);
      }
    }
  }
  if (!(rep.min_H_over_ncj > 1)) throw RegionValidityError("H <= n c_j inside the step-3 region");
  const double scale = lat > 0 ? std::pow(2.0, -j / 2.0) * eps1 / lat : 0.0;
  rep.coefficient_max = -std::numeric_limits<double>::infinity();
  for (const auto& p : pts) {
    rep.coefficient_max =
        std::max(rep.coefficient_max, rep.lambda_j - rep.c_j * p.A2 / (p.H - rep.c_j));
    const double f = std::exp(rep.lambda_j * p.t) * scale * std::abs(p.u) / (p.H - rep.c_j);
    if (p.piece == Piece::Lateral) rep.sup_lateral = std::max(rep.sup_lateral, f);
    if (p.piece == Piece::Initial) rep.sup_initial = std::max(rep.sup_initial, f);
    rep.sup_all = std::max(rep.sup_all, f);
  }
  rep.pass = rep.identity < 0 && rep.coefficient_max < 0 && rep.sup_all <= rep.bound;
  return rep;
}

int step3_slab_threshold(int j_max) {
  int fail = 0;
  const double ln2 = std::log(2.0);
  for (int j = 1; j <= j_max; ++j) {
    const double lhs = -std::pow(2.0, j / 50.0) + (j / 50.0 + j / 100.0 + j) * ln2;
    if (lhs > 0) fail = j;
  }
  return fail < j_max ? fail + 1 : -1;
}

}  // namespace rotsym
