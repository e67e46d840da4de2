#include "rotsym/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <queue>

#include "rotsym/errors.hpp"
#include "rotsym/sphere.hpp"

namespace rotsym {

TriMesh icosphere(int subdiv) {
  const double g = (1 + std::sqrt(5.0)) / 2;
  TriMesh m;
  m.V = {{-1, g, 0}, {1, g, 0}, {-1, -g, 0}, {1, -g, 0}, {0, -1, g}, {0, 1, g},
         {0, -1, -g}, {0, 1, -g}, {g, 0, -1}, {g, 0, 1}, {-g, 0, -1}, {-g, 0, 1}};
  m.F = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
         {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
         {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
  for (auto& v : m.V) v.normalize();
  for (int s = 0; s < subdiv; ++s) {
    std::map<std::pair<int, int>, int> mid;
    auto midpoint = [&](int a, int b) {
      auto key = std::minmax(a, b);
      auto it = mid.find(key);
      if (it != mid.end()) return it->second;
      m.V.push_back((m.V[a] + m.V[b]).normalized());
      return mid[key] = static_cast<int>(m.V.size()) - 1;
    };
    std::vector<std::array<int, 3>> F;
    for (auto [a, b, c] : m.F) {
      int ab = midpoint(a, b), bc = midpoint(b, c), ca = midpoint(c, a);
      F.push_back({a, ab, ca});
      F.push_back({b, bc, ab});
      F.push_back({c, ca, bc});
      F.push_back({ab, bc, ca});
    }
    m.F = std::move(F);
  }
  return m;
}

TriMesh scaled(const TriMesh& m, const Vec3& axes, const Mat& R) {
  TriMesh o = m;
  const Eigen::Matrix3d Q = R;
  for (auto& v : o.V) v = Q * axes.cwiseProduct(v);
  return o;
}

void check_convex(const TriMesh& m, double tol) {
  if (m.V.size() < 4 || m.F.empty()) throw PreconditionError("mesh has too few elements");
  Vec3 c = Vec3::Zero();
  for (const auto& v : m.V) c += v;
  c /= static_cast<double>(m.V.size());
  Eigen::Matrix3d C = Eigen::Matrix3d::Zero();
  for (const auto& v : m.V) C += (v - c) * (v - c).transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(C);
  const Vec3 ev = es.eigenvalues();
  if (!(ev(0) > tol * tol * ev(2))) throw PreconditionError("flat mesh");
  double scale = 0;
  for (const auto& v : m.V) scale = std::max(scale, (v - c).norm());
  for (const auto& f : m.F) {
    Vec3 nrm = (m.V[f[1]] - m.V[f[0]]).cross(m.V[f[2]] - m.V[f[0]]);
    const double a = nrm.norm();
    if (a == 0) throw PreconditionError("degenerate face");
    nrm /= a;
    if (nrm.dot(m.V[f[0]] - c) < 0) nrm = -nrm;
    for (const auto& v : m.V)
      if (nrm.dot(v - m.V[f[0]]) > tol * scale) throw PreconditionError("nonconvex mesh");
  }
}

namespace {

struct Graph {
  std::vector<Vec3> node;
  std::vector<std::vector<std::pair<int, double>>> adj;
};

Graph steiner_graph(const TriMesh& m, int k) {
  Graph g;
  g.node = m.V;
  std::map<std::pair<int, int>, std::vector<int>> edge_pts;
  auto edge = [&](int a, int b) -> std::vector<int> {
    auto key = std::minmax(a, b);
    auto it = edge_pts.find(key);
    if (it == edge_pts.end()) {
      std::vector<int> ids{key.first};
      for (int i = 1; i <= k; ++i) {
        const double s = static_cast<double>(i) / (k + 1);
        g.node.push_back((1 - s) * m.V[key.first] + s * m.V[key.second]);
        ids.push_back(static_cast<int>(g.node.size()) - 1);
      }
      ids.push_back(key.second);
      it = edge_pts.emplace(key, ids).first;
    }
    return it->second;
  };
  std::vector<std::vector<int>> face_pts;
  for (auto [a, b, c] : m.F) {
    std::vector<int> ids;
    for (auto [p, q] : {std::pair{a, b}, {b, c}, {c, a}}) {
      auto e = edge(p, q);
      ids.insert(ids.end(), e.begin(), e.end());
    }
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    face_pts.push_back(std::move(ids));
  }
  g.adj.resize(g.node.size());
  std::map<std::pair<int, int>, bool> seen;
  for (const auto& ids : face_pts)
    for (std::size_t i = 0; i < ids.size(); ++i)
      for (std::size_t j = i + 1; j < ids.size(); ++j) {
        if (!seen.emplace(std::pair{ids[i], ids[j]}, true).second) continue;
        const double w = (g.node[ids[i]] - g.node[ids[j]]).norm();
        g.adj[ids[i]].push_back({ids[j], w});
        g.adj[ids[j]].push_back({ids[i], w});
      }
  return g;
}

double eccentric_distance(const Graph& g, int src) {
  std::vector<double> d(g.node.size(), std::numeric_limits<double>::infinity());
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  d[src] = 0;
  pq.push({0, src});
  while (!pq.empty()) {
    auto [du, u] = pq.top();
    pq.pop();
    if (du > d[u]) continue;
    for (auto [v, w] : g.adj[u])
      if (du + w < d[v]) {
        d[v] = du + w;
        pq.push({d[v], v});
      }
  }
  return *std::max_element(d.begin(), d.end());
}

}  // namespace

DiameterReport diameters(const TriMesh& m, const DiameterOptions& opt) {
  check_convex(m);
  DiameterReport r;
  const int nv = static_cast<int>(m.V.size());
  for (int i = 0; i < nv; ++i)
    for (int j = i + 1; j < nv; ++j) r.d2 = std::max(r.d2, (m.V[i] - m.V[j]).norm());
  Graph g = steiner_graph(m, opt.steiner);
  r.nodes = g.node.size();
  std::vector<double> ecc(nv);
  if (opt.parallel) {
    configure_threads();
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < nv; ++i) ecc[i] = eccentric_distance(g, i);
  } else {
    for (int i = 0; i < nv; ++i) ecc[i] = eccentric_distance(g, i);
  }
  r.d1 = *std::max_element(ecc.begin(), ecc.end());
  r.ratio = r.d1 / r.d2;
  return r;
}

CurvedPoints round_sphere_points(int n, double R, int res) {
  SphereGrid sg = make_sphere_grid(n - 2, res);
  CurvedPoints p;
  for (const auto& th : sg.points) {
    p.x.push_back(R * th);
    p.H.push_back((n - 2) / R);
  }
  return p;
}

CurvedPoints cylinder_cross_section(int n, double R, int sphere_res, int z_res) {
  const double rho = std::sqrt(2.0 * (n - 2));
  SphereGrid sg = make_sphere_grid(n - 2, sphere_res);
  CurvedPoints p;
  for (int k = 0; k < z_res; ++k) {
    const double z = -R + 2 * R * k / (z_res - 1);
    for (const auto& th : sg.points) {
      Vec x(n);
      x.head(n - 1) = rho * th;
      x(n - 1) = z;
      p.x.push_back(x);
      p.H.push_back((n - 2) / rho);
    }
  }
  return p;
}

double eccentricity(const CurvedPoints& p) {
  double d = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i)
    for (std::size_t j = i + 1; j < p.x.size(); ++j) d = std::max(d, (p.x[i] - p.x[j]).norm());
  return d * *std::max_element(p.H.begin(), p.H.end());
}

ConeReport cone_containment(const std::vector<Vec>& pts, double eta, const Vec& apex,
                            const Vec& omega) {
  ConeReport r;
  r.margin = std::numeric_limits<double>::infinity();
  const Vec w = omega.normalized();
  for (const auto& x : pts) {
    Vec v = x - apex;
    if (v.norm() <= 1) continue;
    ++r.tested;
    const double a = v.dot(w);
    const double slack = a - eta * (v - a * w).norm();
    r.margin = std::min(r.margin, slack);
  }
  r.contained = r.margin >= 0;
  return r;
}

WeightedPoints shrinker_points(int k, int n, int sphere_res, int flat_nodes, double R) {
  const double rho = std::sqrt(2.0 * k);
  SphereGrid sg = make_sphere_grid(k, sphere_res);
  std::vector<double> gx, gw;
  gauss_legendre(flat_nodes, gx, gw);
  const int m = n - k;
  std::size_t total = 1;
  for (int i = 0; i < m; ++i) total *= flat_nodes;
  WeightedPoints p;
  p.n = n;
  const double jac = std::pow(rho, k) * std::pow(R, m);
  for (std::size_t s = 0; s < sg.size(); ++s)
    for (std::size_t idx = 0; idx < total; ++idx) {
      Vec x(n + 1);
      x.head(k + 1) = rho * sg.points[s];
      double w = sg.weights[s] * jac;
      std::size_t rest = idx;
      for (int i = 0; i < m; ++i) {
        const int c = static_cast<int>(rest % flat_nodes);
        rest /= flat_nodes;
        x(k + 1 + i) = R * gx[c];
        w *= gw[c];
      }
      p.x.push_back(std::move(x));
      p.w.push_back(w);
    }
  return p;
}

WeightedPoints hyperplane_points(int n, int nodes, double R) {
  std::vector<double> gx, gw;
  gauss_legendre(nodes, gx, gw);
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= nodes;
  WeightedPoints p;
  p.n = n;
  for (std::size_t idx = 0; idx < total; ++idx) {
    Vec x = Vec::Zero(n + 1);
    double w = std::pow(R, n);
    std::size_t rest = idx;
    for (int i = 0; i < n; ++i) {
      const int c = static_cast<int>(rest % nodes);
      rest /= nodes;
      x(i) = R * gx[c];
      w *= gw[c];
    }
    p.x.push_back(std::move(x));
    p.w.push_back(w);
  }
  return p;
}

WeightedPoints transform(const WeightedPoints& p, const Mat& R, const Vec& b) {
  WeightedPoints o = p;
  for (auto& x : o.x) x = R * x + b;
  return o;
}

WeightedPoints scale_points(const WeightedPoints& p, double c) {
  WeightedPoints o = p;
  for (auto& x : o.x) x *= c;
  for (auto& w : o.w) w *= std::pow(c, p.n);
  return o;
}

DensityValue gaussian_density(const WeightedPoints& p, const DensityQuery& q, double tol) {
  const double t0 = q.t0;
  if (!(t0 > 0)) throw DomainError("t0 must be positive");
  const double R = q.R > 0 ? q.R : 14 * std::sqrt(t0);
  DensityValue out;
  out.tail = std::exp(-R * R / (8 * t0));
  if (out.tail > tol) throw PrecisionError("Gaussian truncation tail above tolerance");
  const double pre = std::pow(4 * kPi * t0, -p.n / 2.0);
  double s = 0;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    const double d2 = (p.x[i] - q.x0).squaredNorm();
    if (d2 > R * R) continue;
    s += p.w[i] * std::exp(-d2 / (4 * t0));
  }
  out.value = pre * s;
  return out;
}

std::vector<DensityRow> density_table(int n) {
  std::vector<DensityRow> rows;
  const double R = 14.0;
  for (int k = n - 2; k <= n; ++k) {
    DensityQuery q;
    q.x0 = Vec::Zero(n + 1);
    q.R = R;
    const int flat = k == n ? 1 : 60;
    const double v1 = gaussian_density(shrinker_points(k, n, 4, flat, R), q).value;
    const auto v2 = gaussian_density(shrinker_points(k, n, 6, flat * 3 / 2, R), q);
    DensityRow row;
    row.k = k;
    row.n = n;
    row.value = v2.value;
    row.error = std::abs(v2.value - v1) + v2.tail;
    row.exact = sphere_area(k) * std::pow(2.0 * k, k / 2.0) * std::pow(4 * kPi, -k / 2.0) *
                std::exp(-k / 2.0);
    rows.push_back(row);
  }
  return rows;
}

HeightReport height_monotonicity(const ModelTag& tag, const std::vector<Trajectory>& tr) {
  HeightReport r;
  if (tag.kind != ModelKind::Bowl && tag.kind != ModelKind::BowlCrossR) {
    r.applicable = false;
    return r;
  }
  const Vec w = tag.axis();
  for (std::size_t i = 0; i < tr.size(); ++i) {
    const auto& T = tr[i];
    for (std::size_t k = 0; k + 1 < T.t.size(); ++k) {
      const double dh = (T.x[k + 1].dot(w) - T.t[k + 1]) - (T.x[k].dot(w) - T.t[k]);
      const double rate = dh / (T.t[k + 1] - T.t[k]);
      r.violation = std::max(r.violation, rate);
      if (i == 0) r.tip_rate = std::max(r.tip_rate, std::abs(rate));
    }
  }
  return r;
}

}  // namespace rotsym
