#include "rotsym/fields.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <algorithm>
#include <cmath>

namespace rotsym {

SoBasis standard_so_basis(int n) {
  if (n < 3) throw DomainError("so(n-1) basis needs n >= 3");
  SoBasis b;
  b.n = n;
  const double c = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n - 1; ++i)
    for (int j = i + 1; j < n - 1; ++j) {
      Mat J = Mat::Zero(n + 1, n + 1);
      J(i, j) = c;
      J(j, i) = -c;
      b.J.push_back(J);
      b.index.push_back({i, j});
    }
  return b;
}

Vec RotationFieldSet::eval(int alpha, const Vec& x) const {
  return S * (basis.J[alpha] * (S.transpose() * (x - q)));
}

Mat RotationFieldSet::eval_all(const Vec& x) const {
  const Vec y = S.transpose() * (x - q);
  Mat out(basis.N(), x.size());
  for (int a = 0; a < basis.N(); ++a) out.row(a) = (S * (basis.J[a] * y)).transpose();
  return out;
}

RotationFieldSet reference_fields(int n) {
  RotationFieldSet f;
  f.basis = standard_so_basis(n);
  f.S = Mat::Identity(n + 1, n + 1);
  f.q = Vec::Zero(n + 1);
  return f;
}

Mat gauge_kernel(const RotationFieldSet& f, double cutoff) {
  const int D = f.n() + 1;
  Mat M(f.basis.N() * D, D);
  for (int a = 0; a < f.basis.N(); ++a) M.middleRows(a * D, D) = f.basis.J[a] * f.S.transpose();
  Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullV);
  const Vec& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  std::vector<int> cols;
  for (int i = 0; i < D; ++i)
    if (i >= s.size() || s(i) < cutoff * smax) cols.push_back(i);
  Mat K(D, cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c) K.col(c) = svd.matrixV().col(cols[c]);
  return K;
}

void impose_gauge(RotationFieldSet& f, double cutoff) {
  Mat K = gauge_kernel(f, cutoff);
  f.q -= K * (K.transpose() * f.q);
}

namespace {

template <class Eval>
SymmetryReport defect_of(const Eval& eval, const std::vector<SurfaceSample>& s, bool parallel) {
  const long m = static_cast<long>(s.size());
  std::vector<double> def(m), mag(m);
  auto body = [&](long i) {
    Mat K = eval(s[i].x);
    def[i] = (K * s[i].nu).cwiseAbs().maxCoeff() * s[i].H;
    mag[i] = K.rowwise().norm().maxCoeff() * s[i].H;
  };
  if (parallel) {
    configure_threads();
#pragma omp parallel for schedule(static)
    for (long i = 0; i < m; ++i) body(i);
  } else {
    for (long i = 0; i < m; ++i) body(i);
  }
  SymmetryReport r;
  r.count = s.size();
  for (long i = 0; i < m; ++i) {
    r.defect = std::max(r.defect, def[i]);
    r.magnitude = std::max(r.magnitude, mag[i]);
  }
  return r;
}

}  // namespace

SymmetryReport symmetry_defect(const RotationFieldSet& f, const SurfaceSampleSet& s) {
  return defect_of([&](const Vec& x) { return f.eval_all(x); }, s.samples, true);
}

SymmetryReport symmetry_defect_serial(const RotationFieldSet& f, const SurfaceSampleSet& s) {
  return defect_of([&](const Vec& x) { return f.eval_all(x); }, s.samples, false);
}

SymmetryReport symmetry_defect(const MixedFields& f, const SurfaceSampleSet& s) {
  return defect_of([&](const Vec& x) { return f.eval_all(x); }, s.samples, true);
}

SymmetryReport symmetry_defect(const RotationFieldSet& f, const std::vector<SurfaceSample>& s) {
  return defect_of([&](const Vec& x) { return f.eval_all(x); }, s, true);
}

std::vector<Mat> complement_generators(int n) {
  std::vector<Mat> G;
  const double c = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < n - 1; ++i)
    for (int a = n - 1; a <= n; ++a) {
      Mat g = Mat::Zero(n + 1, n + 1);
      g(i, a) = c;
      g(a, i) = -c;
      G.push_back(g);
    }
  return G;
}

Mat antisym_exp(const Mat& A) { return A.exp(); }

Mat polar_orthogonal(const Mat& A) {
  Eigen::JacobiSVD<Mat> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

namespace {

struct Linearization {
  Vec r;
  Mat J;
  double objective;
};

Linearization linearize(const std::vector<SurfaceSample>& s, const RotationFieldSet& f,
                        const std::vector<Mat>& G, bool jacobian) {
  const int n = f.n();
  const int N = f.basis.N();
  const int P = static_cast<int>(G.size()) + (n - 1);
  Linearization L;
  L.r.resize(static_cast<long>(s.size()) * N);
  if (jacobian) L.J.resize(L.r.size(), P);
  std::vector<std::vector<Mat>> comm(G.size());
  if (jacobian)
    for (std::size_t g = 0; g < G.size(); ++g)
      for (int a = 0; a < N; ++a) comm[g].push_back(G[g] * f.basis.J[a] - f.basis.J[a] * G[g]);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const Vec y = f.S.transpose() * (s[i].x - f.q);
    const Vec m = f.S.transpose() * s[i].nu;
    const double H = s[i].H;
    for (int a = 0; a < N; ++a) {
      const long row = static_cast<long>(i) * N + a;
      L.r(row) = m.dot(f.basis.J[a] * y) * H;
      if (!jacobian) continue;
      for (std::size_t g = 0; g < G.size(); ++g) L.J(row, g) = m.dot(comm[g][a] * y) * H;
      for (int k = 0; k < n - 1; ++k)
        L.J(row, G.size() + k) = -m.dot(f.basis.J[a].col(k)) * H;
    }
  }
  L.objective = L.r.squaredNorm();
  return L;
}

RotationFieldSet apply_step(const RotationFieldSet& f, const std::vector<Mat>& G, const Vec& d) {
  const int n = f.n();
  Mat Xi = Mat::Zero(n + 1, n + 1);
  for (std::size_t g = 0; g < G.size(); ++g) Xi += d(g) * G[g];
  RotationFieldSet out = f;
  Vec dq = Vec::Zero(n + 1);
  dq.head(n - 1) = d.tail(n - 1);
  out.q = f.q + f.S * dq;
  out.S = polar_orthogonal(f.S * antisym_exp(Xi));
  return out;
}

}  // namespace

FitResult fit_rotation_fields(const std::vector<SurfaceSample>& samples,
                              const RotationFieldSet& init, int max_iter, double tol) {
  const int n = init.n();
  const auto G = complement_generators(n);
  RotationFieldSet cur = init;
  cur.S = polar_orthogonal(cur.S);
  FitResult best;
  Linearization lin = linearize(samples, cur, G, true);
  double ratio = 0;
  for (int it = 0; it < max_iter; ++it) {
    Eigen::BDCSVD<Mat> svd(lin.J, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vec& sv = svd.singularValues();
    ratio = sv(sv.size() - 1) / sv(0);
    if (!(sv(0) > 0) || ratio < 1e-8)
      throw IdentifiabilityError("Gauss-Newton Jacobian rank deficient (sigma ratio " +
                                 std::to_string(ratio) + ")");
    Vec step = svd.solve(-lin.r);
    double alpha = 1.0;
    RotationFieldSet trial;
    Linearization tl;
    bool accepted = false;
    for (int ls = 0; ls < 40; ++ls) {
      trial = apply_step(cur, G, alpha * step);
      tl = linearize(samples, trial, G, false);
      if (tl.objective <= lin.objective) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    const double moved = alpha * step.norm();
    if (accepted) {
      cur = trial;
      lin = linearize(samples, cur, G, true);
    }
    best.iterations = it + 1;
    if (!accepted || moved <= tol || lin.objective <= tol * tol) {
      best.fields = cur;
      impose_gauge(best.fields);
      best.objective = lin.objective;
      best.sigma_ratio = ratio;
      best.report = symmetry_defect(best.fields, samples);
      return best;
    }
  }
  best.fields = cur;
  impose_gauge(best.fields);
  best.objective = lin.objective;
  best.sigma_ratio = ratio;
  best.report = symmetry_defect(best.fields, samples);
  throw FitNonconvergence("rotation field fit did not converge", best);
}

FitResult fit_rotation_fields(const SurfaceSampleSet& samples, const RotationFieldSet& init,
                              int max_iter, double tol) {
  return fit_rotation_fields(samples.samples, init, max_iter, tol);
}

double alignment_residual(const RotationFieldSet& K1, const RotationFieldSet& K2, const Mat& omega,
                          const Vec& center, double radius, double H_center,
                          const SurfaceSampleSet& samples) {
  double res = 0;
  for (const auto& s : samples.samples) {
    if ((s.x - center).norm() > radius) continue;
    Mat d = K1.eval_all(s.x) - omega * K2.eval_all(s.x);
    res = std::max(res, d.rowwise().norm().maxCoeff() * H_center);
  }
  return res;
}

Alignment align_field_sets(const RotationFieldSet& K1, const RotationFieldSet& K2,
                           const Vec& center, double radius, double H_center,
                           const SurfaceSampleSet& samples) {
  const int N = K1.basis.N();
  Mat B = Mat::Zero(N, N);
  Alignment out;
  for (const auto& s : samples.samples) {
    if ((s.x - center).norm() > radius) continue;
    B += K2.eval_all(s.x) * K1.eval_all(s.x).transpose();
    ++out.count;
  }
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeFullU | Eigen::ComputeFullV);
  out.omega = svd.matrixV() * svd.matrixU().transpose();
  out.residual = alignment_residual(K1, K2, out.omega, center, radius, H_center, samples);
  out.identity_residual =
      alignment_residual(K1, K2, Mat::Identity(N, N), center, radius, H_center, samples);
  return out;
}

EpsSymmetry is_eps_symmetric(const FlowSamples& flow, int center, int slice, double eps,
                             const RotationFieldSet& init, double L, double T, double scale) {
  const int n = init.n();
  if (L < 0) L = 100.0 * std::pow(n, 2.5);
  if (T < 0) T = 1e4 * std::pow(n, 5);
  FlowSamples nb = parabolic_neighborhood(flow, center, slice, L, T);
  std::vector<SurfaceSample> all;
  for (const auto& sl : nb.slices) all.insert(all.end(), sl.samples.begin(), sl.samples.end());
  FitResult fit;
  try {
    fit = fit_rotation_fields(all, init);
  } catch (const FitNonconvergence& e) {
    fit = e.best;
  }
  EpsSymmetry out;
  out.witness = fit.fields;
  out.report = fit.report;
  out.report.defect *= scale;
  out.report.magnitude *= scale;
  out.report.region = "P(" + std::to_string(L) + "," + std::to_string(T) + ")";
  out.symmetric = out.report.defect <= eps && out.report.magnitude <= 5.0 * n;
  return out;
}

}  // namespace rotsym
