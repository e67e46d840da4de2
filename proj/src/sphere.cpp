#include "rotsym/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

void build_neighbors(SphereGrid& g) {
  const int m = static_cast<int>(g.size());
  const int want = std::min(m - 1, 2 * g.k + 2);
  g.neighbors.assign(m, {});
  std::vector<std::pair<double, int>> d(m);
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) d[j] = {(g.points[i] - g.points[j]).squaredNorm(), j};
    std::partial_sort(d.begin(), d.begin() + want + 1, d.end());
    for (int s = 1; s <= want; ++s) {
      int j = d[s].second;
      g.neighbors[i].push_back(j);
      g.neighbors[j].push_back(i);
    }
  }
  for (auto& nb : g.neighbors) {
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
  }
}

// nodes/weights for the weight (1 - x^2)^a on [-1, 1]
void gauss_gegenbauer(int m, double a, std::vector<double>& x, std::vector<double>& w) {
  if (a == 0) return gauss_legendre(m, x, w);
  const double lam = a + 0.5;
  Mat T = Mat::Zero(m, m);
  for (int j = 1; j < m; ++j) {
    const double b = std::sqrt(j * (j + 2 * lam - 1) / (4 * (j + lam) * (j + lam - 1)));
    T(j, j - 1) = T(j - 1, j) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  const double mu0 = std::sqrt(kPi) * std::tgamma(a + 1) / std::tgamma(a + 1.5);
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()(i);
    w[i] = mu0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  }
}

SphereGrid raw_grid(int k, int res) {
  SphereGrid g;
  g.k = k;
  g.res = res;
  if (k == 1) {
    const int m = 2 * res;
    for (int i = 0; i < m; ++i) {
      double a = 2.0 * kPi * i / m;
      Vec p(2);
      p << std::cos(a), std::sin(a);
      g.points.push_back(p);
      g.weights.push_back(2.0 * kPi / m);
    }
    return g;
  }
  std::vector<double> x, w;
  gauss_gegenbauer(res, 0.5 * (k - 2), x, w);
  SphereGrid lower = raw_grid(k - 1, res);
  for (int i = 0; i < res; ++i) {
    double s = std::sqrt(std::max(0.0, 1.0 - x[i] * x[i]));
    double wt = w[i];
    for (std::size_t j = 0; j < lower.size(); ++j) {
      Vec p(k + 1);
      p.head(k) = s * lower.points[j];
      p(k) = x[i];
      g.points.push_back(p);
      g.weights.push_back(wt * lower.weights[j]);
    }
  }
  return g;
}

}  // namespace

SphereGrid make_sphere_grid(int k, int res) {
  if (k < 1 || res < 1) throw DomainError("sphere grid needs k >= 1 and res >= 1");
  SphereGrid g = raw_grid(k, res);
  build_neighbors(g);
  return g;
}

int sphere_grid_exact_degree(int k, int res) {
  (void)k;
  return 2 * res - 1;
}

Mat tangent_basis(const Vec& theta) {
  const int d = static_cast<int>(theta.size());
  Mat P = Mat::Identity(d, d) - theta * theta.transpose();
  Eigen::JacobiSVD<Mat> svd(P, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(d - 1);
}

}  // namespace rotsym
