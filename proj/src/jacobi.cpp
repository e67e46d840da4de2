#include "rotsym/jacobi.hpp"

#include <algorithm>
#include <cmath>

#include "rotsym/errors.hpp"

namespace rotsym {

HeatCN::HeatCN(const ZGrid& g) : g_(g) {
  if (g.N < 2 || !(g.L > 0)) throw ResolutionError("heat grid needs N >= 2 and L > 0");
  const int m = 2 * g.N - 1;
  const double h = g.h();
  Q_.resize(m, m);
  mu_.resize(m);
  for (int i = 0; i < m; ++i) {
    for (int k = 0; k < m; ++k)
      Q_(i, k) = std::sqrt(2.0 / (m + 1)) * std::sin(kPi * (i + 1) * (k + 1) / (m + 1));
    double s = std::sin(kPi * (i + 1) / (2.0 * (m + 1)));
    mu_(i) = -4.0 * s * s / (h * h);
  }
}

Mat discrete_laplacian(const Mat& v, double h) {
  const long m = v.rows() - 2;
  return (v.block(2, 1, m, m) + v.block(0, 1, m, m) + v.block(1, 2, m, m) + v.block(1, 0, m, m) -
          4.0 * v.block(1, 1, m, m)) /
         (h * h);
}

void HeatCN::step(Mat& v, double dt, double c, const Mat& next) const {
  const int m = 2 * g_.N - 1;
  const int e = 2 * g_.N;
  const double h2 = g_.h() * g_.h();
  Mat U = v.block(1, 1, m, m);
  Mat rhs = U + 0.5 * dt * (discrete_laplacian(v, g_.h()) + c * U);
  rhs.row(0) += 0.5 * dt * next.block(0, 1, 1, m) / h2;
  rhs.row(m - 1) += 0.5 * dt * next.block(e, 1, 1, m) / h2;
  rhs.col(0) += 0.5 * dt * next.block(1, 0, m, 1) / h2;
  rhs.col(m - 1) += 0.5 * dt * next.block(1, e, m, 1) / h2;
  Mat T = Q_ * rhs * Q_;
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) T(i, j) /= 1.0 - 0.5 * dt * (mu_(i) + mu_(j) + c);
  v = next;
  v.block(1, 1, m, m) = Q_ * T * Q_;
}

double gauge_exponent(int n, double lambda) { return (n - 2 - lambda) / (2.0 * (n - 2)); }

Mat ModeRun::vhat(std::size_t k) const { return v[k] * std::pow(-times[k], gamma); }

double ModeRun::at(std::size_t k, double z1, double z2) const {
  const double h = grid.h();
  auto locate = [&](double z, int& i, double& f) {
    double s = (z + grid.L) / h;
    i = std::clamp(static_cast<int>(std::floor(s)), 0, 2 * grid.N - 1);
    f = s - i;
  };
  int i, j;
  double a, b;
  locate(z1, i, a);
  locate(z2, j, b);
  const Mat& m = v[k];
  return (1 - a) * (1 - b) * m(i, j) + a * (1 - b) * m(i + 1, j) + (1 - a) * b * m(i, j + 1) +
         a * b * m(i + 1, j + 1);
}

namespace {

Mat fill(const ZGrid& g, const ScalarField& f, double t, double scale, bool boundary_only) {
  const int K = g.nodes();
  Mat out = Mat::Zero(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      bool edge = i == 0 || j == 0 || i == K - 1 || j == K - 1;
      if (boundary_only && !edge) continue;
      out(i, j) = scale * f(g.z(i), g.z(j), t);
    }
  return out;
}

}  // namespace

ModeRun evolve_mode(int n, double lambda, double L, const ScalarField& initial,
                    const ScalarField& boundary, double t0, double t1, const EvolveOptions& opt) {
  if (!(t0 < t1) || !(t1 < 0)) throw DomainError("mode evolution needs t0 < t1 < 0");
  ModeRun run;
  run.n = n;
  run.lambda = lambda;
  run.gamma = gauge_exponent(n, lambda);
  run.grid = {L, opt.N};
  HeatCN cn(run.grid);
  const bool gauged = !opt.direct;
  auto gauge = [&](double t) { return gauged ? std::pow(-t, run.gamma) : 1.0; };

  std::vector<double> rec = opt.record;
  std::sort(rec.begin(), rec.end());
  rec.erase(std::remove_if(rec.begin(), rec.end(), [&](double r) { return r < t0 || r > t1; }),
            rec.end());
  std::size_t next_rec = 0;

  Mat v = fill(run.grid, initial, t0, gauge(t0), false);
  auto record = [&](double t) {
    run.times.push_back(t);
    run.v.push_back(v / gauge(t));
  };
  double t = t0;
  if (next_rec < rec.size() && rec[next_rec] <= t0) {
    record(t0);
    ++next_rec;
  }
  const double uniform = opt.fixed_steps > 0 ? (t1 - t0) / opt.fixed_steps : 0.0;
  int k = 0;
  while (t < t1) {
    double dt = opt.fixed_steps > 0 ? uniform : std::min(opt.dt_rel * (-t), opt.dt_max);
    double target = next_rec < rec.size() ? rec[next_rec] : t1;
    if (opt.fixed_steps > 0) {
      ++k;
      double tn = k == opt.fixed_steps ? t1 : t0 + k * uniform;
      dt = tn - t;
    } else if (t + dt >= target - 1e-12 * std::abs(target)) {
      dt = target - t;
    }
    const double tn = t + dt;
    const double c = gauged ? 0.0 : run.gamma / (-(t + 0.5 * dt));
    Mat next = fill(run.grid, boundary, tn, gauge(tn), true);
    cn.step(v, dt, c, next);
    t = tn;
    while (next_rec < rec.size() && rec[next_rec] <= t + 1e-12 * std::abs(t)) {
      record(t);
      ++next_rec;
    }
  }
  if (run.times.empty() || run.times.back() != t) record(t);
  return run;
}

CylinderField evolve_jacobi_cylinder(const SphereSpectrum& spec, const SphereField& initial,
                                     const SphereField& boundary, double L, double t0, double t1,
                                     const EvolveOptions& opt, bool parallel) {
  const int M = spec.modes();
  const auto& pts = spec.grid.points;
  auto project = [&](const SphereField& f, int m) {
    return [&, m](double z1, double z2, double t) {
      double acc = 0;
      for (std::size_t p = 0; p < pts.size(); ++p)
        acc += spec.grid.weights[p] * spec.Y(m, p) * f(pts[p], z1, z2, t);
      return acc;
    };
  };
  CylinderField out;
  out.grid = {L, opt.N};
  out.t = t1;
  out.coeff.resize(M);
  auto body = [&](int m) {
    ModeRun r = evolve_mode(spec.n, spec.lambda(m), L, project(initial, m), project(boundary, m),
                            t0, t1, opt);
    out.coeff[m] = r.v.back();
  };
  if (parallel) {
    configure_threads();
#pragma omp parallel for schedule(dynamic)
    for (int m = 0; m < M; ++m) body(m);
  } else {
    for (int m = 0; m < M; ++m) body(m);
  }
  return out;
}

double fit_time_exponent(const std::vector<double>& t, const std::vector<double>& y) {
  std::vector<double> x(t.size()), a(y.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    x[i] = -t[i];
    a[i] = std::abs(y[i]);
  }
  return loglog_slope(x, a);
}

namespace {

std::vector<double> core_axis(double R) {
  std::vector<double> z;
  for (int i = 0; i < 5; ++i) z.push_back(-R + 0.5 * R * i);
  return z;
}

bool in_window(double t, double R) { return t >= -R * R * (1 + 1e-12) && t <= -1 + 1e-12; }

}  // namespace

double core_sup(const ModeRun& run, double R, bool gauged) {
  R = std::min(R, run.grid.L);
  double s = 0;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    if (!in_window(run.times[k], R)) continue;
    double g = gauged ? std::pow(-run.times[k], run.gamma) : 1.0;
    for (double a : core_axis(R))
      for (double b : core_axis(R)) s = std::max(s, std::abs(run.at(k, a, b)) * g);
  }
  return s;
}

double mode_decay_bound(const ModeRun& run, double core_R) { return core_sup(run, core_R); }

double fit_power(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2 || x.size() != y.size()) throw FitError("power fit needs at least two points");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!(x[i] > 0) || !(y[i] > 0)) throw FitError("power fit needs positive data");
  return loglog_slope(x, y);
}

DecayReport mode_decay_sweep(const DecayConfig& cfg) {
  DecayReport rep;
  rep.L0 = cfg.L0;
  if (rep.L0.empty())
    for (int p = 4; p <= 7; ++p) rep.L0.push_back(std::pow(2.0, p) * std::pow(cfg.n, 2.5));
  SphereSpectrum spec = sphere_spectrum(cfg.n, cfg.l_max, 0, false);
  const int nl = cfg.l_max - cfg.l_min + 1;
  std::vector<double> record;
  for (int i = 0; i <= 8; ++i) record.push_back(-std::pow(cfg.core_R * cfg.core_R, 1.0 - i / 8.0));
  for (double L0 : rep.L0) {
    const double t0 = -L0 * L0 / 16.0;
    const double eps = cfg.eps;
    ScalarField env = [eps](double, double, double t) { return eps * std::sqrt(-t); };
    EvolveOptions opt;
    opt.N = cfg.N;
    opt.dt_rel = cfg.dt_rel;
    opt.record = record;
    std::vector<ModeRun> runs(nl);
    configure_threads();
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < nl; ++k) {
      const int l = cfg.l_min + k;
      runs[k] = evolve_mode(cfg.n, spec.lambda_l[l], L0 / 4.0, env, env, t0, -1.0, opt);
    }
    double agg = 0;
    const double R = std::min(cfg.core_R, L0 / 4.0);
    for (std::size_t ti = 0; ti < runs[0].times.size(); ++ti) {
      if (!in_window(runs[0].times[ti], R)) continue;
      for (double a : core_axis(R))
        for (double b : core_axis(R)) {
          double s = 0;
          for (int k = 0; k < nl; ++k)
            s += spec.mult_l[cfg.l_min + k] * std::abs(runs[k].at(ti, a, b));
          agg = std::max(agg, s);
        }
    }
    for (int k = 0; k < nl; ++k)
      rep.rows.push_back({L0, cfg.l_min + k, spec.mult_l[cfg.l_min + k], core_sup(runs[k], R)});
    rep.aggregate.push_back(agg);
  }
  rep.power = fit_power(rep.L0, rep.aggregate);
  return rep;
}

AffineFit case2_affine_extract(const ModeRun& run, double core_R) {
  const double R = std::min(core_R, run.grid.L);
  std::vector<Eigen::Vector3d> rows;
  std::vector<double> vals;
  std::size_t last = 0;
  for (std::size_t k = 0; k < run.times.size(); ++k) {
    if (!in_window(run.times[k], R)) continue;
    last = k;
    for (double a : core_axis(R))
      for (double b : core_axis(R)) {
        rows.push_back({1.0, a, b});
        vals.push_back(run.at(k, a, b));
      }
  }
  AffineFit fit;
  if (rows.empty()) return fit;
  Mat X(rows.size(), 3);
  Vec y(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    X.row(i) = rows[i].transpose();
    y(i) = vals[i];
  }
  Vec c = X.colPivHouseholderQr().solve(y);
  fit.A = c(0);
  fit.B = c(1);
  fit.C = c(2);
  fit.residual = (X * c - y).cwiseAbs().maxCoeff();
  const Mat& v = run.v[last];
  const double h = run.grid.h();
  const int mid = run.grid.N;
  const int span = std::max(1, std::min(run.grid.N - 1, static_cast<int>(R / h)));
  for (int i = mid - span; i <= mid + span; ++i)
    for (int j = mid - span; j <= mid + span; ++j) {
      double d11 = (v(i + 1, j) - 2 * v(i, j) + v(i - 1, j)) / (h * h);
      double d22 = (v(i, j + 1) - 2 * v(i, j) + v(i, j - 1)) / (h * h);
      double d12 = (v(i + 1, j + 1) - v(i + 1, j - 1) - v(i - 1, j + 1) + v(i - 1, j - 1)) / (4 * h * h);
      fit.second_difference =
          std::max({fit.second_difference, std::abs(d11), std::abs(d22), std::abs(d12)});
    }
  return fit;
}

Mode0Result mode0_check(const SphereSpectrum& spec, const RadiusFn& r, int degree,
                        const RotationFieldSet& fields, int alpha, double z1, double z2) {
  const auto [i, j] = fields.basis.index[alpha];
  Mode0Result out;
  double mean = 0;
  for (std::size_t p = 0; p < spec.grid.size(); ++p) {
    const Vec& th = spec.grid.points[p];
    const double w = spec.grid.weights[p];
    out.divergence +=
        w * killing_derivative([&](const Vec& x) { return r(x, z1, z2); }, th, i, j, degree);
    SurfaceSample s = radial_graph_sample(spec.n, r, th, z1, z2);
    mean += w * fields.eval(alpha, s.x).dot(s.nu);
  }
  out.plain_mean = std::abs(mean);
  return out;
}

}  // namespace rotsym
