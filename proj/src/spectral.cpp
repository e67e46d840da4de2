#include "rotsym/spectral.hpp"

#include <boost/math/special_functions/factorials.hpp>
#include <boost/math/special_functions/legendre.hpp>
#include <algorithm>
#include <cmath>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

// real spherical harmonic without Condon-Shortley phase; sm > 0 cos, sm < 0 sin
double real_sh(int l, int sm, double x, double az) {
  const int m = std::abs(sm);
  double norm = std::sqrt((2.0 * l + 1) / (4.0 * kPi) * boost::math::factorial<double>(l - m) /
                          boost::math::factorial<double>(l + m));
  double p = boost::math::legendre_p(l, m, x) * ((m % 2) ? -1.0 : 1.0);
  if (sm == 0) return norm * p;
  return std::sqrt(2.0) * norm * p * (sm > 0 ? std::cos(m * az) : std::sin(m * az));
}

std::vector<int> level_order(int l) {
  std::vector<int> o;
  for (int m = 1; m <= l; ++m) {
    o.push_back(m);
    o.push_back(-m);
  }
  o.push_back(0);
  return o;
}

Vec basis_at(int n, int l_max, const Vec& th) {
  std::vector<double> out;
  if (n == 3) {
    const double az = std::atan2(th(1), th(0));
    out.push_back(1.0 / std::sqrt(2.0 * kPi));
    for (int l = 1; l <= l_max; ++l) {
      out.push_back(std::cos(l * az) / std::sqrt(kPi));
      out.push_back(std::sin(l * az) / std::sqrt(kPi));
    }
  } else {
    const double az = std::atan2(th(1), th(0));
    const double x = std::clamp(th(2), -1.0, 1.0);
    for (int l = 0; l <= l_max; ++l)
      for (int sm : level_order(l)) out.push_back(real_sh(l, sm, x, az));
  }
  return Eigen::Map<Vec>(out.data(), out.size());
}

}  // namespace

Vec SphereSpectrum::eval_basis(const Vec& theta) const {
  if (!has_basis) throw CapabilityError("spectrum has no tabulated basis");
  return basis_at(n, l_max, theta);
}

SphereSpectrum sphere_spectrum(int n, int l_max, int res, bool basis) {
  if (n < 3) throw DomainError("sphere spectrum needs n >= 3");
  if (l_max < 0) throw DomainError("l_max must be nonnegative");
  SphereSpectrum s;
  s.n = n;
  s.l_max = l_max;
  for (int l = 0; l <= l_max; ++l) {
    s.lambda_l.push_back(static_cast<double>(l) * (l + n - 3));
    s.mult_l.push_back(static_cast<int>(binomial(n + l - 2, n - 2) - binomial(n + l - 4, n - 2)));
  }
  if (!basis) return s;
  if (n != 3 && n != 4) throw CapabilityError("basis tables exist for n = 3 and n = 4 only");
  if (res == 0) res = l_max + 1;
  if (res < l_max + 1)
    throw ResolutionError("sphere grid too coarse for l_max " + std::to_string(l_max));
  s.has_basis = true;
  s.grid = make_sphere_grid(n - 2, res);
  for (int l = 0; l <= l_max; ++l)
    for (int k = 0; k < s.mult_l[l]; ++k) s.level.push_back(l);
  s.Y.resize(s.level.size(), s.grid.size());
  for (std::size_t p = 0; p < s.grid.size(); ++p) s.Y.col(p) = basis_at(n, l_max, s.grid.points[p]);
  return s;
}

Vec harmonic_transform(const Vec& values, const SphereSpectrum& s) {
  if (!s.has_basis) throw CapabilityError("spectrum has no tabulated basis");
  if (values.size() != static_cast<long>(s.grid.size()))
    throw ResolutionError("values do not match the spectrum grid");
  Vec wv = values;
  for (long p = 0; p < wv.size(); ++p) wv(p) *= s.grid.weights[p];
  return s.Y * wv;
}

Vec inverse_transform(const Vec& coeffs, const SphereSpectrum& s) {
  if (!s.has_basis) throw CapabilityError("spectrum has no tabulated basis");
  return s.Y.transpose() * coeffs;
}

double theta_l2_norm(int n) { return std::sqrt(sphere_area(n - 2) / (n - 1)); }

double killing_derivative(const std::function<double(const Vec&)>& f, const Vec& theta, int i,
                          int j, int degree) {
  const int M = 2 * degree + 2;
  double acc = 0;
  for (int k = 0; k < M; ++k) {
    const double psi = 2.0 * kPi * k / M;
    Vec th = theta;
    th(i) = std::cos(psi) * theta(i) + std::sin(psi) * theta(j);
    th(j) = -std::sin(psi) * theta(i) + std::cos(psi) * theta(j);
    const double g = f(th);
    for (int p = 1; p <= degree; ++p) acc += 2.0 * p * g * std::sin(p * psi) / M;
  }
  return acc / std::sqrt(2.0);
}

}  // namespace rotsym
