#include "rotsym/improvement.hpp"

#include <algorithm>
#include <cmath>

#include "rotsym/errors.hpp"
#include "rotsym/sphere.hpp"

namespace rotsym {

const std::array<std::array<double, 2>, 5>& tuning_stencil() {
  static const std::array<std::array<double, 2>, 5> s{
      {{0.0, 0.0}, {1.0, 0.0}, {-1.0, 0.0}, {0.0, 1.0}, {0.0, -1.0}}};
  return s;
}

TuningData extract_linear_coeffs(const CylinderSlab& slab, const SphereSpectrum& spec) {
  if (!spec.has_basis || spec.l_max < 1) throw CapabilityError("need l = 1 basis tables");
  const int n = spec.n;
  const long K = static_cast<long>(slab.z.size());
  Mat X(K, 3);
  for (long k = 0; k < K; ++k) X.row(k) << 1.0, slab.z[k][0], slab.z[k][1];
  Eigen::ColPivHouseholderQR<Mat> qr(X);
  if (K < 3 || qr.rank() < 3) throw FitError("affine fit is rank deficient");
  TuningData d;
  d.n = n;
  d.theta_norm = theta_l2_norm(n);
  const int N = static_cast<int>(slab.u.size());
  d.A = d.B = d.C = Mat::Zero(N, n - 1);
  Mat Yw = spec.Y.middleRows(1, n - 1);
  for (std::size_t p = 0; p < spec.grid.size(); ++p) Yw.col(p) *= spec.grid.weights[p];
  for (int a = 0; a < N; ++a) {
    Mat c = Yw * slab.u[a];  // (n-1) x K
    for (int i = 0; i < n - 1; ++i) {
      Vec s = qr.solve(Vec(c.row(i).transpose()));
      d.A(a, i) = s(0);
      d.B(a, i) = s(1);
      d.C(a, i) = s(2);
    }
  }
  return d;
}

Mat stencil_F(const SphereSpectrum& spec, const RadiusFn& r) {
  if (!spec.has_basis || spec.l_max < 1) throw CapabilityError("need l = 1 basis tables");
  const int n = spec.n;
  Mat F = Mat::Zero(n - 1, 5);
  for (int s = 0; s < 5; ++s) {
    const auto& z = tuning_stencil()[s];
    for (std::size_t p = 0; p < spec.grid.size(); ++p) {
      const double v = spec.grid.weights[p] * r(spec.grid.points[p], z[0], z[1]);
      for (int i = 0; i < n - 1; ++i) F(i, s) += v * spec.Y(1 + i, p);
    }
  }
  return F;
}

TuningData build_tuning(int n, const Mat& F) {
  TuningData d;
  d.n = n;
  d.F = F;
  d.theta_norm = theta_l2_norm(n);
  d.b = Vec::Zero(n + 1);
  d.P = Mat::Zero(n + 1, n + 1);
  for (int i = 0; i < n - 1; ++i) {
    d.b(i) = F(i, 0);
    d.P(n - 1, i) = -0.5 * (F(i, 1) - F(i, 2));
    d.P(n, i) = -0.5 * (F(i, 3) - F(i, 4));
    d.P(i, n - 1) = -d.P(n - 1, i);
    d.P(i, n) = -d.P(n, i);
  }
  return d;
}

RotationFieldSet retune_fields(const RotationFieldSet& f, const TuningData& d, bool literal) {
  const double c = literal ? 1.0 : d.theta_norm;
  RotationFieldSet out = f;
  out.S = f.S * antisym_exp(d.P / c);
  out.q = f.q + f.S * (d.b / c);
  impose_gauge(out);
  return out;
}

RotationFieldSet retune_fields(const RotationFieldSet& f, const SphereSpectrum& spec,
                               const RadiusFn& r, bool literal) {
  return retune_fields(f, build_tuning(spec.n, stencil_F(spec, r)), literal);
}

namespace {

struct Grad {
  Mat v, g1, g2;
};

Grad node_gradient(const Mat& v, double h) {
  const long K = v.rows();
  Grad g{v, Mat::Zero(K, K), Mat::Zero(K, K)};
  for (long i = 0; i < K; ++i)
    for (long j = 0; j < K; ++j) {
      long i0 = std::max(0L, i - 1), i1 = std::min(K - 1, i + 1);
      long j0 = std::max(0L, j - 1), j1 = std::min(K - 1, j + 1);
      g.g1(i, j) = (v(i1, j) - v(i0, j)) / ((i1 - i0) * h);
      g.g2(i, j) = (v(i, j1) - v(i, j0)) / ((j1 - j0) * h);
    }
  return g;
}

double bilinear(const ZGrid& grid, const Mat& m, double z1, double z2) {
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
  return (1 - a) * (1 - b) * m(i, j) + a * (1 - b) * m(i + 1, j) + (1 - a) * b * m(i, j + 1) +
         a * b * m(i + 1, j + 1);
}

struct SpherePoint {
  Vec theta;
  double Y = 0;
  Vec gradY;
};

std::vector<SpherePoint> sphere_points(const SphereSpectrum& spec, int mode, int res) {
  SphereGrid g = make_sphere_grid(spec.n - 2, res);
  std::vector<SpherePoint> out;
  const double h = 1e-5;
  for (const Vec& th : g.points) {
    SpherePoint p{th, spec.eval_basis(th)(mode), Vec::Zero(th.size())};
    Mat E = tangent_basis(th);
    for (long k = 0; k < E.cols(); ++k) {
      double yp = spec.eval_basis((th + h * E.col(k)).normalized())(mode);
      double ym = spec.eval_basis((th - h * E.col(k)).normalized())(mode);
      p.gradY += (yp - ym) / (2 * h) * E.col(k);
    }
    out.push_back(std::move(p));
  }
  return out;
}

// max_alpha |<K_alpha, nu>| H and |K_alpha| H on the graph r = rho + a v Y at one (z, t)
void graph_defect(int n, const RotationFieldSet& f, const std::vector<SpherePoint>& pts,
                  double t, double z1, double z2, double av, double ag1, double ag2, double& def,
                  double& mag) {
  const double rho = cylinder_radius(n, t);
  const double H = cylinder_H(n, t);
  for (const auto& p : pts) {
    const double r = rho + av * p.Y;
    Vec x = Vec::Zero(n + 1);
    x.head(n - 1) = r * p.theta;
    x(n - 1) = z1;
    x(n) = z2;
    Vec N = Vec::Zero(n + 1);
    N.head(n - 1) = p.theta - (av / r) * p.gradY;
    N(n - 1) = -ag1 * p.Y;
    N(n) = -ag2 * p.Y;
    Vec nu = -N.normalized();
    Mat K = f.eval_all(x);
    def = std::max(def, (K * nu).cwiseAbs().maxCoeff() * H);
    mag = std::max(mag, K.rowwise().norm().maxCoeff() * H);
  }
}

}  // namespace

ImprovementResult improvement_experiment(const ImprovementConfig& cfg) {
  const int n = cfg.n;
  if (cfg.level < 1) throw DomainError("perturbation level must be >= 1");
  SphereSpectrum spec = sphere_spectrum(n, std::max(cfg.level, 1));
  int mode = 0;
  while (spec.level[mode] != cfg.level) ++mode;
  const double lambda = spec.lambda_l[cfg.level];
  const double L = cfg.L0 / 4.0;
  const double t0 = -cfg.L0 * cfg.L0 / 16.0;
  const double R = std::min(cfg.core_R, L);

  EvolveOptions opt;
  opt.N = cfg.N;
  opt.dt_rel = cfg.dt_rel;
  for (int i = 0; i <= 24; ++i) opt.record.push_back(-std::pow(-t0, 1.0 - i / 24.0));
  for (int i = 0; i <= 8; ++i) opt.record.push_back(-std::pow(R * R, 1.0 - i / 8.0));
  std::sort(opt.record.begin(), opt.record.end());
  opt.record.erase(std::unique(opt.record.begin(), opt.record.end()), opt.record.end());
  ScalarField env = [](double, double, double t) { return std::sqrt(-t); };
  ModeRun run = evolve_mode(n, lambda, L, env, env, t0, -1.0, opt);
  std::vector<Grad> grads;
  for (const Mat& v : run.v) grads.push_back(node_gradient(v, run.grid.h()));

  const auto pts = sphere_points(spec, mode, cfg.sphere_res);
  const RotationFieldSet ref = reference_fields(n);
  const int K = run.grid.nodes();
  const int T = static_cast<int>(run.times.size());

  auto before = [&](double a) {
    std::vector<double> def(T, 0.0);
    configure_threads();
#pragma omp parallel for schedule(dynamic)
    for (int k = 0; k < T; ++k) {
      double d = 0, m = 0;
      for (int i = 0; i < K; i += cfg.stride)
        for (int j = 0; j < K; j += cfg.stride)
          graph_defect(n, ref, pts, run.times[k], run.grid.z(i), run.grid.z(j),
                       a * grads[k].v(i, j), a * grads[k].g1(i, j), a * grads[k].g2(i, j), d, m);
      def[k] = d;
    }
    return *std::max_element(def.begin(), def.end());
  };

  ImprovementResult res;
  res.L0 = cfg.L0;
  res.level = cfg.level;
  res.eps = cfg.eps;
  if (cfg.eps == 0) {
    res.factor = std::nan("");
    return res;
  }
  // amplitude normalization: bisection on a log scale
  const double probe = before(cfg.eps);
  double lo = 0.5 * cfg.eps * cfg.eps / probe, hi = 2 * cfg.eps * cfg.eps / probe;
  double a = cfg.eps * cfg.eps / probe;
  double d = before(a);
  for (int it = 0; it < 60 && std::abs(d / cfg.eps - 1) > 0.01; ++it) {
    (d > cfg.eps ? hi : lo) = a;
    a = std::sqrt(lo * hi);
    d = before(a);
  }
  res.amplitude = a;
  res.defect_before = d;

  const Grad& last = grads.back();
  RadiusFn r_final = [&](const Vec& th, double z1, double z2) {
    return cylinder_radius(n, -1.0) + a * bilinear(run.grid, last.v, z1, z2) * spec.eval_basis(th)(mode);
  };
  res.tuning = build_tuning(n, stencil_F(spec, r_final));
  RotationFieldSet tuned = retune_fields(ref, res.tuning);
  res.b_norm = (res.tuning.b / res.tuning.theta_norm).norm();
  res.P_norm = (res.tuning.P / res.tuning.theta_norm).norm();

  double def = 0, mag = 0;
  for (int k = 0; k < T; ++k) {
    const double t = run.times[k];
    if (t < -R * R * (1 + 1e-12)) continue;
    for (int i = 0; i <= 8; ++i)
      for (int j = 0; j <= 8; ++j) {
        const double z1 = -R + R * i / 4.0, z2 = -R + R * j / 4.0;
        graph_defect(n, tuned, pts, t, z1, z2, a * bilinear(run.grid, grads[k].v, z1, z2),
                     a * bilinear(run.grid, grads[k].g1, z1, z2),
                     a * bilinear(run.grid, grads[k].g2, z1, z2), def, mag);
      }
  }
  res.defect_after = def;
  res.magnitude_after = mag;
  res.factor = def / cfg.eps;
  return res;
}

}  // namespace rotsym
