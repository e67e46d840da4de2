#include "rotsym/heat_kernel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <algorithm>
#include <cmath>

#include "rotsym/errors.hpp"

namespace rotsym {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
constexpr double kQuadTol = 1e-10;

double geometric_tail(double a, int K) {
  return std::exp(-a * K * K) / (1.0 - std::exp(-a * (2.0 * K + 1)));
}

struct Sum1D {
  double s = 0;   // signed image sum
  double ds = 0;  // derivative in y
  double abs = 0;
};

Sum1D image_sum(double x, double y, double L, double t, int K) {
  Sum1D out;
  for (int k = -K; k <= K; ++k) {
    double u = x - y + 4.0 * k * L;
    double w = x + y - 2.0 * L + 4.0 * k * L;
    double gu = std::exp(-u * u / (4 * t));
    double gw = std::exp(-w * w / (4 * t));
    out.s += gu - gw;
    out.ds += gu * u / (2 * t) + gw * w / (2 * t);
    out.abs += gu + gw;
  }
  return out;
}

double derivative_tail(double L, double t, int K) {
  const double a = 2.0 * L * L / t;
  return 4.0 / (2.0 * t) * std::sqrt(4.0 * t / std::exp(1.0)) * geometric_tail(a, K);
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol, int depth,
             double* err) {
  double e = 0;
  double v = GK::integrate(f, a, b, 0, 0.0, &e);
  if (e <= tol || depth == 0) {
    *err += e;
    return v;
  }
  const double m = 0.5 * (a + b);
  return adapt(f, a, m, 0.5 * tol, depth - 1, err) + adapt(f, m, b, 0.5 * tol, depth - 1, err);
}

double integrate(const std::function<double(double)>& f, std::vector<double> cuts, double* err) {
  std::sort(cuts.begin(), cuts.end());
  double total = 0, e = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 0) continue;
    total += adapt(f, cuts[i], cuts[i + 1], kQuadTol, 20, &e);
  }
  if (err) *err = e;
  return total;
}

std::vector<double> peak_cuts(double lo, double hi, double c, double width) {
  std::vector<double> cuts{lo, hi};
  for (double p : {c - 8 * width, c, c + 8 * width})
    if (p > lo && p < hi) cuts.push_back(p);
  return cuts;
}

void check_t(double t) {
  if (!(t > 0)) throw DomainError("kernel time must be positive");
}

}  // namespace

double image_tail_bound(double L, double t, int K) {
  // discarded |k| > K: four terms per |k| at distance >= 4L(|k| - 1)
  return 4.0 * geometric_tail(4.0 * L * L / t, K);
}

int image_cutoff(double L, double t, double tol) {
  const double scale = 1.0 / (4.0 * kPi * t);
  for (int K = 1; K < 100000; ++K) {
    double B = image_tail_bound(L, t, K);
    double A = 2.0 * (2 * K + 1);
    if (scale * (2 * A * B + B * B) < tol && scale * derivative_tail(L, t, K) * (A + B) < tol)
      return K;
  }
  throw PrecisionError("image cutoff did not reach tolerance");
}

KernelValue eval_dirichlet_kernel(const ImageKernel& k, double x1, double x2, double y1, double y2,
                                  double t) {
  check_t(t);
  KernelValue out;
  out.K = k.K_max >= 0 ? k.K_max : image_cutoff(k.L, t, k.tol);
  Sum1D a = image_sum(x1, y1, k.L, t, out.K);
  Sum1D b = image_sum(x2, y2, k.L, t, out.K);
  const double B = image_tail_bound(k.L, t, out.K);
  const double scale = 1.0 / (4.0 * kPi * t);
  out.value = scale * a.s * b.s;
  out.error = scale * (a.abs * B + B * b.abs + B * B);
  return out;
}

KernelValue kernel_normal_derivative(const ImageKernel& k, double x1, double x2, int side,
                                     double s_along, double t) {
  check_t(t);
  KernelValue out;
  out.K = k.K_max >= 0 ? k.K_max : image_cutoff(k.L, t, k.tol);
  const bool first = side % 2 == 0;
  const double sign = side < 2 ? 1.0 : -1.0;
  const double yn = sign * k.L;
  Sum1D a = image_sum(first ? x1 : x2, yn, k.L, t, out.K);
  Sum1D b = image_sum(first ? x2 : x1, s_along, k.L, t, out.K);
  const double scale = 1.0 / (4.0 * kPi * t);
  const double B = image_tail_bound(k.L, t, out.K);
  const double dB = derivative_tail(k.L, t, out.K);
  out.value = scale * sign * a.ds * b.s;
  out.error = scale * (dB * (b.abs + B) + std::abs(a.ds) * B);
  return out;
}

QuadResult kernel_apply(const ImageKernel& k, double x1, double x2, double t,
                        const std::function<double(double, double)>& f) {
  check_t(t);
  const double w = std::sqrt(t);
  double kerr = 0;
  double qerr_total = 0;
  auto outer = [&](double y1) {
    double e = 0;
    double v = integrate(
        [&](double y2) {
          KernelValue kv = eval_dirichlet_kernel(k, x1, x2, y1, y2, t);
          kerr = std::max(kerr, kv.error);
          return kv.value * f(y1, y2);
        },
        peak_cuts(-k.L, k.L, x2, w), &e);
    qerr_total = std::max(qerr_total, e);
    return v;
  };
  QuadResult r;
  double e = 0;
  r.value = integrate(outer, peak_cuts(-k.L, k.L, x1, w), &e);
  r.error = e + 2 * k.L * qerr_total + 4 * k.L * k.L * kerr;
  if (!std::isfinite(r.value) || r.error > 1e-6 * std::max(1.0, std::abs(r.value)))
    throw PrecisionError("kernel quadrature did not converge");
  return r;
}

QuadResult mass_bound(const ImageKernel& k, double x1, double x2, double t) {
  const double w = std::sqrt(t);
  double kerr = 0, qerr = 0;
  auto outer = [&](double y1) {
    double e = 0;
    double v = integrate(
        [&](double y2) {
          KernelValue kv = eval_dirichlet_kernel(k, x1, x2, y1, y2, t);
          kerr = std::max(kerr, kv.error);
          return std::abs(kv.value);
        },
        peak_cuts(-k.L, k.L, x2, w), &e);
    qerr = std::max(qerr, e);
    return v;
  };
  QuadResult r;
  double e = 0;
  r.value = integrate(outer, peak_cuts(-k.L, k.L, x1, w), &e);
  r.error = e + 2 * k.L * qerr + 4 * k.L * k.L * kerr;
  if (!std::isfinite(r.value) || r.error > 1e-6) throw PrecisionError("mass quadrature did not converge");
  return r;
}

namespace {

// integral over the boundary of -d_nu K_s(x, y) g(y)
QuadResult boundary_integral(const ImageKernel& k, double x1, double x2, double s,
                             const std::function<double(double, double)>& g, bool absolute) {
  QuadResult r;
  const double w = std::sqrt(s);
  for (int side = 0; side < 4; ++side) {
    const bool first = side % 2 == 0;
    const double sign = side < 2 ? 1.0 : -1.0;
    double kerr = 0, e = 0;
    auto f = [&](double a) {
      KernelValue kv = kernel_normal_derivative(k, x1, x2, side, a, s);
      kerr = std::max(kerr, kv.error);
      double y1 = first ? sign * k.L : a;
      double y2 = first ? a : sign * k.L;
      return absolute ? std::abs(kv.value) : -kv.value * g(y1, y2);
    };
    r.value += integrate(f, peak_cuts(-k.L, k.L, first ? x2 : x1, w), &e);
    r.error += e + 2 * k.L * kerr;
  }
  return r;
}

}  // namespace

FluxValue boundary_flux_bound(const ImageKernel& k, double x1, double x2, double s) {
  const double lim = k.L / 25.0;
  if (std::abs(x1) > lim * (1 + 1e-12) || std::abs(x2) > lim * (1 + 1e-12))
    throw DomainError("flux point outside the validity region");
  if (!(s > 0) || !(s < k.L * k.L)) throw DomainError("flux time outside (0, L^2)");
  QuadResult q = boundary_integral(k, x1, x2, s, nullptr, true);
  FluxValue v;
  v.flux = q.value;
  v.error = q.error;
  const double L2 = k.L * k.L;
  v.C50 = v.flux * s * s / (L2 * std::exp(-L2 / (50 * s)));
  v.C1000 = v.flux * s * s / (L2 * std::exp(-L2 / (1000 * s)));
  return v;
}

FluxSweep flux_sweep(double L, const std::vector<double>& s_values, int x_per_axis) {
  FluxSweep out;
  ImageKernel k{L};
  const double lim = L / 25.0;
  std::vector<double> xs;
  for (int i = 0; i < x_per_axis; ++i)
    xs.push_back(x_per_axis == 1 ? 0.0 : -lim + 2 * lim * i / (x_per_axis - 1));
  for (double s : s_values)
    for (double a : xs)
      for (double b : xs) out.rows.push_back({L, a, b, s, {}});
  configure_threads();
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < static_cast<int>(out.rows.size()); ++i) {
    auto& r = out.rows[i];
    r.v = boundary_flux_bound(k, r.x1, r.x2, r.s);
  }
  for (auto& r : out.rows) {
    out.C50 = std::max(out.C50, r.v.C50);
    out.C1000 = std::max(out.C1000, r.v.C1000);
  }
  return out;
}

QuadResult solve_via_kernel(const ImageKernel& k, const std::function<double(double, double)>& u0,
                            const BoundaryData& g, double t0, double x1, double x2, double t) {
  if (!(t > t0)) throw DomainError("solution time must exceed t0");
  QuadResult init = kernel_apply(k, x1, x2, t - t0, u0);
  double berr = 0;
  auto in_time = [&](double tau) {
    const double s = t - tau;
    if (s <= 0) return 0.0;
    QuadResult q = boundary_integral(
        k, x1, x2, s, [&](double y1, double y2) { return g(y1, y2, tau); }, false);
    berr = std::max(berr, q.error);
    return q.value;
  };
  double e = 0;
  const double dist = k.L - std::max(std::abs(x1), std::abs(x2));
  std::vector<double> cuts{t0, t};
  for (double c : {t - dist * dist / 4, t - dist * dist, t - 4 * dist * dist})
    if (c > t0 && c < t) cuts.push_back(c);
  double b = integrate(in_time, cuts, &e);
  QuadResult r;
  r.value = init.value + b;
  r.error = init.error + e + (t - t0) * berr;
  if (!std::isfinite(r.value)) throw PrecisionError("solution quadrature did not converge");
  return r;
}

}  // namespace rotsym
