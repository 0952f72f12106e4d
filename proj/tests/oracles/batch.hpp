#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Least squares by column-pivoted QR on the full design matrix.
inline Eigen::VectorXd batch_ols(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  return a.colPivHouseholderQr().solve(y);
}

// Textbook two-pass population variance in extended precision.
inline double two_pass_variance(const std::vector<double>& xs) {
  long double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<long double>(xs.size());
  long double ss = 0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return static_cast<double>(ss / static_cast<long double>(xs.size()));
}

}  // namespace oracle
