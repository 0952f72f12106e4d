#pragma once

#include <array>
#include <span>

#include <Eigen/Dense>

namespace cdasim {

// Recursive least squares for small linear models (d <= 6 in practice).
// Starts from x = 0, P = p0 * I; after m >= d well-conditioned rows the
// coefficients match batch least squares up to an O(1/p0) ridge bias.
class RlsEstimator {
 public:
  static constexpr double default_p0 = 1e6;

  explicit RlsEstimator(int dim, double p0 = default_p0);

  int dim() const { return static_cast<int>(coef_.size()); }

  // Returns false (estimator unchanged) when any input is non-finite.
  // Throws std::invalid_argument on a dimension mismatch.
  bool update(std::span<const double> row, double y);

  double predict(std::span<const double> row) const;

  const Eigen::VectorXd& coefficients() const { return coef_; }
  const Eigen::MatrixXd& covariance() const { return p_; }
  const Eigen::VectorXd& last_gain() const { return gain_; }
  long updates() const { return updates_; }

 private:
  Eigen::VectorXd coef_;
  Eigen::MatrixXd p_;
  Eigen::VectorXd gain_;
  long updates_ = 0;
};

// Design rows for the intelligent agent's two models.
struct FeatureRow {
  static constexpr int flow_dim = 4;
  static constexpr int pnl_dim = 6;

  // [1, p_mid, S_ref, eps]
  static std::array<double, flow_dim> flow(double mid, double ref_spread, double eps) {
    return {1.0, mid, ref_spread, eps};
  }
  // [1, p_mid, S_ref, eps, eps^2, eps^3]
  static std::array<double, pnl_dim> pnl(double mid, double ref_spread, double eps) {
    return {1.0, mid, ref_spread, eps, eps * eps, eps * eps * eps};
  }
};

}  // namespace cdasim
