#include "rotsym/geometry.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <limits>
#include <queue>

#include "rotsym/errors.hpp"
#include "rotsym/sphere.hpp"

namespace rotsym {

namespace odeint = boost::numeric::odeint;

double bowl_ddphi(int n, double r, double dphi) {
  if (r == 0.0) return 1.0 / n;
  return (1.0 + dphi * dphi) * (1.0 - (n - 1) * dphi / r);
}

double BowlProfile::ddphi_at(std::size_t i) const { return bowl_ddphi(n, r[i], dphi[i]); }

BowlProfile::Point BowlProfile::at(double radius) const {
  if (radius < 0 || radius > r.back() * (1 + 1e-14))
    throw DomainError("profile evaluated outside [0, r_max]");
  if (radius <= r[1]) {
    double c4 = 1.0 / (4.0 * n * n * n * (n + 2.0));
    double p = radius * radius / (2.0 * n) + c4 * std::pow(radius, 4);
    double dp = radius / n + 4 * c4 * std::pow(radius, 3);
    return {p, dp, bowl_ddphi(n, radius, dp)};
  }
  auto it = std::upper_bound(r.begin(), r.end(), radius);
  std::size_t i = std::min<std::size_t>(std::distance(r.begin(), it), r.size() - 1) - 1;
  double h = r[i + 1] - r[i];
  double s = (radius - r[i]) / h;
  double y0 = phi[i], y1 = phi[i + 1];
  double d0 = dphi[i] * h, d1 = dphi[i + 1] * h;
  double a0 = ddphi_at(i) * h * h, a1 = ddphi_at(i + 1) * h * h;
  // quintic Hermite in the unit variable s
  double s2 = s * s, s3 = s2 * s, s4 = s3 * s, s5 = s4 * s;
  double h0 = 1 - 10 * s3 + 15 * s4 - 6 * s5, h1 = s - 6 * s3 + 8 * s4 - 3 * s5;
  double h2 = 0.5 * (s2 - 3 * s3 + 3 * s4 - s5), h3 = 0.5 * (s3 - 2 * s4 + s5);
  double h4 = -4 * s3 + 7 * s4 - 3 * s5, h5 = 10 * s3 - 15 * s4 + 6 * s5;
  double g0 = -30 * s2 + 60 * s3 - 30 * s4, g1 = 1 - 18 * s2 + 32 * s3 - 15 * s4;
  double g2 = 0.5 * (2 * s - 9 * s2 + 12 * s3 - 5 * s4), g3 = 0.5 * (3 * s2 - 8 * s3 + 5 * s4);
  double g4 = -12 * s2 + 28 * s3 - 15 * s4, g5 = 30 * s2 - 60 * s3 + 30 * s4;
  double k0 = -60 * s + 180 * s2 - 120 * s3, k1 = -36 * s + 96 * s2 - 60 * s3;
  double k2 = 0.5 * (2 - 18 * s + 36 * s2 - 20 * s3), k3 = 0.5 * (6 * s - 24 * s2 + 20 * s3);
  double k4 = -24 * s + 84 * s2 - 60 * s3, k5 = 60 * s - 180 * s2 + 120 * s3;
  double p = h0 * y0 + h1 * d0 + h2 * a0 + h3 * a1 + h4 * d1 + h5 * y1;
  double dp = (g0 * y0 + g1 * d0 + g2 * a0 + g3 * a1 + g4 * d1 + g5 * y1) / h;
  double ddp = (k0 * y0 + k1 * d0 + k2 * a0 + k3 * a1 + k4 * d1 + k5 * y1) / (h * h);
  return {p, dp, ddp};
}

BowlProfile solve_bowl_profile(int n, double r_max, double tol) {
  if (n < 2) throw DomainError("bowl profile needs n >= 2");
  if (!(r_max > 0) || !(tol > 0)) throw DomainError("bowl profile needs r_max > 0 and tol > 0");
  BowlProfile p;
  p.n = n;
  p.tolerance = tol;
  p.r.push_back(0.0);
  p.phi.push_back(0.0);
  p.dphi.push_back(0.0);

  const double r0 = std::min(1e-3, 0.5 * r_max);
  const double c4 = 1.0 / (4.0 * n * n * n * (n + 2.0));
  using State = std::array<double, 2>;
  State y{r0 * r0 / (2.0 * n) + c4 * std::pow(r0, 4), r0 / n + 4 * c4 * std::pow(r0, 3)};
  auto rhs = [n](const State& s, State& ds, double r) {
    ds[0] = s[1];
    ds[1] = bowl_ddphi(n, r, s[1]);
  };
  const double step_tol = std::min(1e-13, tol * 1e-3);
  auto stepper = odeint::make_controlled(step_tol, step_tol, odeint::runge_kutta_dopri5<State>());
  auto observe = [&p](const State& s, double r) {
    p.r.push_back(r);
    p.phi.push_back(s[0]);
    p.dphi.push_back(s[1]);
  };
  try {
    odeint::integrate_adaptive(stepper, rhs, y, r0, r_max, 1e-4, observe);
  } catch (const std::exception& e) {
    throw IntegrationError(std::string("bowl profile integration failed: ") + e.what());
  }
  if (std::abs(p.r.back() - r_max) > 1e-12 * r_max) throw IntegrationError("bowl profile stopped early");
  return p;
}

double bowl_ode_residual(const BowlProfile& p, bool midpoints) {
  double res = 0;
  for (std::size_t i = 1; i + 1 < p.r.size(); ++i) {
    double r = p.r[i], dp = p.dphi[i], ddp = p.ddphi_at(i);
    if (midpoints) {
      r = 0.5 * (p.r[i] + p.r[i + 1]);
      auto q = p.at(r);
      dp = q.dphi;
      ddp = q.ddphi;
    }
    res = std::max(res, std::abs(ddp / (1 + dp * dp) + (p.n - 1) * dp / r - 1.0));
  }
  return res;
}

std::string ModelTag::name() const {
  switch (kind) {
    case ModelKind::Cylinder: return "Cylinder";
    case ModelKind::ShrinkingCylinderFamily: return "ShrinkingCylinderFamily";
    case ModelKind::Bowl: return "Bowl";
    case ModelKind::BowlCrossR: return "BowlCrossR";
    case ModelKind::UserMesh: return "UserMesh";
  }
  return "?";
}

Vec ModelTag::axis() const {
  Vec w = Vec::Zero(n + 1);
  if (kind == ModelKind::Bowl)
    w(n) = 1;
  else
    w(n - 1) = 1;
  return w;
}

double cylinder_radius(int n, double t) {
  if (!(t < 0)) throw DomainError("cylinder needs t < 0");
  return std::sqrt(-2.0 * (n - 2) * t);
}

double cylinder_H(int n, double t) { return (n - 2) / cylinder_radius(n, t); }

namespace {

Vec normalized_mid(const Vec& a, const Vec& b) { return (a + b).normalized(); }

void add_edge(Adjacency& adj, int a, int b, double len) {
  adj[a].push_back({b, len});
  adj[b].push_back({a, len});
}

double split_length(const Vec& xa, const Vec& xm, const Vec& xb) {
  return (xa - xm).norm() + (xm - xb).norm();
}

Vec sorted(Vec v) {
  std::sort(v.data(), v.data() + v.size());
  return v;
}

// samples laid out as ((iz1 * zr + iz2) * M + s)
SurfaceSampleSet product_surface(
    int n, const GridSpec& grid,
    const std::function<SurfaceSample(const Vec&, double, double)>& sample,
    const std::function<Vec(const Vec&, double, double)>& embed) {
  SphereGrid sg = make_sphere_grid(n - 2, grid.sphere_res);
  const int M = static_cast<int>(sg.size());
  const int zr = grid.z_res;
  std::vector<double> z(zr);
  for (int i = 0; i < zr; ++i)
    z[i] = zr == 1 ? 0.0 : -grid.z_extent + 2.0 * grid.z_extent * i / (zr - 1);
  SurfaceSampleSet out;
  out.samples.resize(static_cast<std::size_t>(zr) * zr * M);
  auto id = [&](int a, int b, int s) { return (a * zr + b) * M + s; };
  for (int a = 0; a < zr; ++a)
    for (int b = 0; b < zr; ++b)
      for (int s = 0; s < M; ++s) out.samples[id(a, b, s)] = sample(sg.points[s], z[a], z[b]);
  out.adjacency.assign(out.samples.size(), {});
  for (int a = 0; a < zr; ++a)
    for (int b = 0; b < zr; ++b)
      for (int s = 0; s < M; ++s) {
        const Vec& x = out.samples[id(a, b, s)].x;
        for (int s2 : sg.neighbors[s]) {
          if (s2 <= s) continue;
          Vec m = embed(normalized_mid(sg.points[s], sg.points[s2]), z[a], z[b]);
          add_edge(out.adjacency, id(a, b, s), id(a, b, s2),
                   split_length(x, m, out.samples[id(a, b, s2)].x));
        }
        if (a + 1 < zr) {
          Vec m = embed(sg.points[s], 0.5 * (z[a] + z[a + 1]), z[b]);
          add_edge(out.adjacency, id(a, b, s), id(a + 1, b, s),
                   split_length(x, m, out.samples[id(a + 1, b, s)].x));
        }
        if (b + 1 < zr) {
          Vec m = embed(sg.points[s], z[a], 0.5 * (z[b] + z[b + 1]));
          add_edge(out.adjacency, id(a, b, s), id(a, b + 1, s),
                   split_length(x, m, out.samples[id(a, b + 1, s)].x));
        }
      }
  return out;
}

SurfaceSampleSet sample_cylinder(int n, const GridSpec& grid, double t) {
  const double rho = cylinder_radius(n, t);
  const double H = (n - 2) / rho;
  auto embed = [n, rho](const Vec& th, double z1, double z2) {
    Vec x(n + 1);
    x.head(n - 1) = rho * th;
    x(n - 1) = z1;
    x(n) = z2;
    return x;
  };
  auto sample = [&](const Vec& th, double z1, double z2) {
    SurfaceSample s;
    s.x = embed(th, z1, z2);
    s.nu = Vec::Zero(n + 1);
    s.nu.head(n - 1) = -th;
    s.H = H;
    s.kappa = Vec::Zero(n);
    s.kappa.tail(n - 2).setConstant(1.0 / rho);
    s.A2 = (n - 2) / (rho * rho);
    return s;
  };
  SurfaceSampleSet out = product_surface(n, grid, sample, embed);
  out.tag = {ModelKind::Cylinder, n, t, 1.0};
  return out;
}

// Bowl^d (has_z = false, ambient d+1) or Bowl^d x R (has_z = true, ambient d+2)
SurfaceSampleSet sample_bowl(const ModelTag& tag, const GridSpec& grid, bool has_z) {
  const int d = has_z ? tag.n - 1 : tag.n;
  const int D = tag.n + 1;
  const double kap = tag.kappa;
  if (d < 2) throw DomainError("bowl models need dimension >= 2");
  BowlProfile prof = solve_bowl_profile(d, grid.r_max * kap, 1e-10);
  SphereGrid sg = make_sphere_grid(d - 1, grid.sphere_res);
  const int M = static_cast<int>(sg.size());
  const int R = grid.radial_res;
  const int zr = has_z ? grid.z_res : 1;
  std::vector<double> z(zr, 0.0), rr(R);
  for (int i = 0; i < zr; ++i)
    if (zr > 1) z[i] = -grid.z_extent + 2.0 * grid.z_extent * i / (zr - 1);
  for (int i = 0; i < R; ++i) rr[i] = grid.r_max * (i + 1) / R;

  auto embed = [&](const Vec& th, double r, double zz) {
    Vec x = Vec::Zero(D);
    x.head(d) = r * th;
    x(d) = prof.at(kap * r).phi / kap;
    if (has_z) x(d + 1) = zz;
    return x;
  };
  auto sample = [&](const Vec& th, double r, double zz) {
    SurfaceSample s;
    s.x = embed(th, r, zz);
    auto p = prof.at(kap * r);
    double w = std::sqrt(1 + p.dphi * p.dphi);
    s.nu = Vec::Zero(D);
    s.nu.head(d) = -p.dphi / w * th;
    s.nu(d) = 1.0 / w;
    s.H = kap / w;
    Vec k = Vec::Zero(has_z ? d + 1 : d);
    double radial = kap * p.ddphi / (w * w * w);
    double angular = r > 0 ? p.dphi / (r * w) : kap / d;
    k(0) = radial;
    for (int i = 1; i < d; ++i) k(i) = angular;
    s.kappa = sorted(k);
    s.A2 = s.kappa.squaredNorm();
    return s;
  };

  const int per = 1 + R * M;
  SurfaceSampleSet out;
  out.tag = tag;
  out.samples.resize(static_cast<std::size_t>(zr) * per);
  auto id = [&](int a, int i, int s) { return a * per + (i < 0 ? 0 : 1 + i * M + s); };
  Vec tip_dir = Vec::Zero(d);
  tip_dir(0) = 1;
  for (int a = 0; a < zr; ++a) {
    out.samples[id(a, -1, 0)] = sample(tip_dir, 0.0, z[a]);
    for (int i = 0; i < R; ++i)
      for (int s = 0; s < M; ++s) out.samples[id(a, i, s)] = sample(sg.points[s], rr[i], z[a]);
  }
  out.adjacency.assign(out.samples.size(), {});
  for (int a = 0; a < zr; ++a) {
    for (int s = 0; s < M; ++s) {
      Vec m = embed(sg.points[s], 0.5 * rr[0], z[a]);
      add_edge(out.adjacency, id(a, -1, 0), id(a, 0, s),
               split_length(out.samples[id(a, -1, 0)].x, m, out.samples[id(a, 0, s)].x));
    }
    if (a + 1 < zr) {
      Vec m = embed(tip_dir, 0.0, 0.5 * (z[a] + z[a + 1]));
      add_edge(out.adjacency, id(a, -1, 0), id(a + 1, -1, 0),
               split_length(out.samples[id(a, -1, 0)].x, m, out.samples[id(a + 1, -1, 0)].x));
    }
    for (int i = 0; i < R; ++i)
      for (int s = 0; s < M; ++s) {
        const Vec& x = out.samples[id(a, i, s)].x;
        for (int s2 : sg.neighbors[s]) {
          if (s2 <= s) continue;
          Vec m = embed(normalized_mid(sg.points[s], sg.points[s2]), rr[i], z[a]);
          add_edge(out.adjacency, id(a, i, s), id(a, i, s2),
                   split_length(x, m, out.samples[id(a, i, s2)].x));
        }
        if (i + 1 < R) {
          Vec m = embed(sg.points[s], 0.5 * (rr[i] + rr[i + 1]), z[a]);
          add_edge(out.adjacency, id(a, i, s), id(a, i + 1, s),
                   split_length(x, m, out.samples[id(a, i + 1, s)].x));
        }
        if (a + 1 < zr) {
          Vec m = embed(sg.points[s], rr[i], 0.5 * (z[a] + z[a + 1]));
          add_edge(out.adjacency, id(a, i, s), id(a + 1, i, s),
                   split_length(x, m, out.samples[id(a + 1, i, s)].x));
        }
      }
  }
  return out;
}

}  // namespace

SurfaceSampleSet sample_model(const ModelTag& tag, const GridSpec& grid, double t) {
  if (grid.sphere_res < 1 || grid.z_res < 1 || grid.radial_res < 1)
    throw DomainError("grid resolution must be positive");
  if (tag.n < 3) throw DomainError("models need n >= 3");
  switch (tag.kind) {
    case ModelKind::Cylinder:
    case ModelKind::ShrinkingCylinderFamily: {
      if (tag.n - 2 > 3) throw CapabilityError("cylinder sampling supports n <= 5");
      auto s = sample_cylinder(tag.n, grid, t);
      s.tag.kind = tag.kind;
      return s;
    }
    case ModelKind::Bowl:
      if (tag.n > 5) throw CapabilityError("bowl sampling supports n <= 5");
      return sample_bowl(tag, grid, false);
    case ModelKind::BowlCrossR:
      if (tag.n > 5) throw CapabilityError("bowl sampling supports n <= 5");
      return sample_bowl(tag, grid, true);
    case ModelKind::UserMesh:
      break;
  }
  throw CapabilityError("user meshes are loaded, not sampled");
}

double translator_residual(const SurfaceSampleSet& s, const Vec& omega) {
  double r = 0;
  for (const auto& p : s.samples) r = std::max(r, std::abs(p.H - omega.dot(p.nu)));
  return r;
}

FlowSamples sample_cylinder_family(int n, const GridSpec& grid, const std::vector<double>& times) {
  FlowSamples f;
  for (double t : times) {
    f.times.push_back(t);
    f.slices.push_back(sample_model({ModelKind::ShrinkingCylinderFamily, n, t, 1.0}, grid, t));
  }
  return f;
}

FlowSamples sample_translator_flow(const ModelTag& tag, const GridSpec& grid,
                                   const std::vector<double>& times) {
  SurfaceSampleSet base = sample_model(tag, grid, 0.0);
  FlowSamples f;
  const Vec w = tag.axis();
  for (double t : times) {
    f.times.push_back(t);
    f.slices.push_back(transform(base, Mat::Identity(w.size(), w.size()), t * tag.kappa * w));
  }
  return f;
}

std::vector<double> geodesic_distances(const SurfaceSampleSet& s, int source) {
  std::vector<double> d(s.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[source] = 0;
  pq.push({0.0, source});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (auto [v, w] : s.adjacency[u]) {
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
    }
  }
  return d;
}

FlowSamples parabolic_neighborhood(const FlowSamples& flow, int center, int slice, double L,
                                   double T) {
  const auto& base = flow.slices.at(slice);
  const double H = base.samples.at(center).H;
  if (!(H > 0)) throw DomainError("parabolic neighborhood needs H > 0 at the center");
  const double tbar = flow.times[slice];
  const double t_lo = tbar - T / (H * H);
  const double slack = 1e-12 * std::max(1.0, std::abs(t_lo));
  if (t_lo < flow.times.front() - slack) throw RangeError("time window exceeds available data");
  auto dist = geodesic_distances(base, center);
  const double radius = L / H;
  std::vector<int> keep;
  std::vector<int> remap(base.size(), -1);
  for (std::size_t i = 0; i < base.size(); ++i)
    if (dist[i] <= radius * (1 + 1e-12)) {
      remap[i] = static_cast<int>(keep.size());
      keep.push_back(static_cast<int>(i));
    }
  FlowSamples out;
  for (std::size_t k = 0; k < flow.times.size(); ++k) {
    double t = flow.times[k];
    if (t < t_lo - slack || t > tbar + slack) continue;
    const auto& src = flow.slices[k];
    SurfaceSampleSet sub;
    sub.tag = src.tag;
    sub.adjacency.resize(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
      sub.samples.push_back(src.samples[keep[i]]);
      for (auto [v, w] : src.adjacency[keep[i]])
        if (remap[v] >= 0) sub.adjacency[i].push_back({remap[v], w});
    }
    out.times.push_back(t);
    out.slices.push_back(std::move(sub));
  }
  return out;
}

SurfaceSample parametric_sample(const std::function<Vec(const Vec&)>& X, int d, const Vec& outward,
                                double h) {
  const Vec u0 = Vec::Zero(d);
  const Vec X0 = X(u0);
  const int D = static_cast<int>(X0.size());
  Mat T(D, d);
  std::vector<Vec> Xp(d), Xm(d);
  for (int i = 0; i < d; ++i) {
    Vec e = Vec::Zero(d);
    e(i) = h;
    Xp[i] = X(e);
    Xm[i] = X(-e);
    T.col(i) = (Xp[i] - Xm[i]) / (2 * h);
  }
  Eigen::JacobiSVD<Mat> svd(T, Eigen::ComputeFullU);
  Vec nu = svd.matrixU().col(D - 1);
  if (nu.dot(outward) > 0) nu = -nu;
  Mat g = T.transpose() * T;
  Mat b(d, d);
  for (int i = 0; i < d; ++i) {
    b(i, i) = (Xp[i] - 2 * X0 + Xm[i]).dot(nu) / (h * h);
    for (int j = i + 1; j < d; ++j) {
      Vec ei = Vec::Zero(d), ej = Vec::Zero(d);
      ei(i) = h;
      ej(j) = h;
      Vec xij = (X(ei + ej) - X(ei - ej) - X(ej - ei) + X(-ei - ej)) / (4 * h * h);
      b(i, j) = b(j, i) = xij.dot(nu);
    }
  }
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(b, g);
  SurfaceSample s;
  s.x = X0;
  s.nu = nu;
  s.kappa = es.eigenvalues();
  s.H = s.kappa.sum();
  s.A2 = s.kappa.squaredNorm();
  return s;
}

SurfaceSample radial_graph_sample(int n, const RadiusFn& r, const Vec& theta, double z1,
                                  double z2) {
  const Mat E = tangent_basis(theta);
  auto X = [&](const Vec& u) {
    Vec th = (theta + E * u.head(n - 2)).normalized();
    double a = z1 + u(n - 2), b = z2 + u(n - 1);
    Vec x(n + 1);
    x.head(n - 1) = r(th, a, b) * th;
    x(n - 1) = a;
    x(n) = b;
    return x;
  };
  Vec out = Vec::Zero(n + 1);
  out.head(n - 1) = theta;
  return parametric_sample(X, n, out);
}

SurfaceSampleSet sample_radial_graph(int n, const RadiusFn& r, const GridSpec& grid) {
  auto embed = [&](const Vec& th, double z1, double z2) {
    Vec x(n + 1);
    x.head(n - 1) = r(th, z1, z2) * th;
    x(n - 1) = z1;
    x(n) = z2;
    return x;
  };
  auto sample = [&](const Vec& th, double z1, double z2) {
    return radial_graph_sample(n, r, th, z1, z2);
  };
  SurfaceSampleSet out = product_surface(n, grid, sample, embed);
  out.tag = {ModelKind::UserMesh, n, -1.0, 1.0};
  return out;
}

SurfaceSampleSet transform(const SurfaceSampleSet& s, const Mat& R, const Vec& b) {
  SurfaceSampleSet out = s;
  for (auto& p : out.samples) {
    p.x = R * p.x + b;
    p.nu = R * p.nu;
  }
  return out;
}

std::vector<Trajectory> bowl_trajectories(const BowlProfile& p, const std::vector<double>& r0,
                                          const Vec& direction, double t0, double t1, int steps) {
  const int d = p.n;
  auto rate = [&](double r) {
    double dp = p.at(std::clamp(r, 0.0, p.r_max())).dphi;
    return -dp / (1 + dp * dp);
  };
  std::vector<Trajectory> out;
  const double dt = (t1 - t0) / steps;
  for (double rs : r0) {
    Trajectory tr;
    double r = rs;
    for (int k = 0; k <= steps; ++k) {
      double t = t0 + k * dt;
      Vec x = Vec::Zero(d + 1);
      x.head(d) = r * direction;
      x(d) = p.at(r).phi + t;
      tr.t.push_back(t);
      tr.x.push_back(x);
      double k1 = rate(r), k2 = rate(r + 0.5 * dt * k1), k3 = rate(r + 0.5 * dt * k2),
             k4 = rate(r + dt * k3);
      r = std::max(0.0, r + dt * (k1 + 2 * k2 + 2 * k3 + k4) / 6);
    }
    out.push_back(std::move(tr));
  }
  return out;
}

}  // namespace rotsym
