#include "rotsym/common.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <omp.h>

namespace rotsym {

void configure_threads() {
  static std::once_flag once;
  std::call_once(once, [] {
    if (const char* env = std::getenv("ROTSYM_THREADS")) {
      int t = std::atoi(env);
      if (t > 0) omp_set_num_threads(t);
    }
  });
}

double binomial(int a, int b) {
  if (b < 0 || a < 0 || b > a) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
  return std::round(r);
}

double sphere_area(int k) {
  double m = k + 1;
  return 2.0 * std::pow(kPi, m / 2.0) / std::tgamma(m / 2.0);
}

void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w) {
  Mat T = Mat::Zero(m, m);
  for (int i = 1; i < m; ++i) {
    double b = i / std::sqrt(4.0 * i * i - 1.0);
    T(i, i - 1) = b;
    T(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = es.eigenvalues()(i);
    double v = es.eigenvectors()(0, i);
    w[i] = 2.0 * v * v;
  }
  // symmetrize against eigen-solver roundoff
  for (int i = 0; i < m / 2; ++i) {
    double xs = 0.5 * (x[m - 1 - i] - x[i]);
    double ws = 0.5 * (w[i] + w[m - 1 - i]);
    x[i] = -xs;
    x[m - 1 - i] = xs;
    w[i] = w[m - 1 - i] = ws;
  }
  if (m % 2 == 1) x[m / 2] = 0.0;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace rotsym
