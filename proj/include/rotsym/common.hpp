#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

namespace rotsym {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

inline constexpr double kPi = 3.14159265358979323846;

// thread count from ROTSYM_THREADS, applied once
void configure_threads();

// 1-based binomial with C(a,b) = 0 for b > a or b < 0
double binomial(int a, int b);

// |S^k| for the unit k-sphere
double sphere_area(int k);

// Gauss-Legendre nodes/weights on [-1,1] (Golub-Welsch)
void gauss_legendre(int m, std::vector<double>& x, std::vector<double>& w);

// least-squares slope of log y against log x
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace rotsym
