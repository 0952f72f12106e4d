#include "cdasim/estimators/rls.hpp"

#include <cmath>
#include <stdexcept>

namespace cdasim {

RlsEstimator::RlsEstimator(int dim, double p0)
    : coef_(Eigen::VectorXd::Zero(dim)),
      p_(Eigen::MatrixXd::Identity(dim, dim) * p0),
      gain_(Eigen::VectorXd::Zero(dim)) {
  if (dim < 1) throw std::invalid_argument("rls: dimension must be positive");
  if (!(p0 > 0.0)) throw std::invalid_argument("rls: p0 must be positive");
}

bool RlsEstimator::update(std::span<const double> row, double y) {
  if (static_cast<int>(row.size()) != dim()) throw std::invalid_argument("rls: dimension mismatch");
  if (!std::isfinite(y)) return false;
  for (double v : row)
    if (!std::isfinite(v)) return false;

  const Eigen::Map<const Eigen::VectorXd> a(row.data(), dim());
  const Eigen::VectorXd pa = p_ * a;
  const double denom = 1.0 + a.dot(pa);
  const Eigen::VectorXd k = pa / denom;
  const double residual = y - a.dot(coef_);

  Eigen::VectorXd next_coef = coef_ + k * residual;
  Eigen::MatrixXd next_p = p_ - k * pa.transpose();
  next_p = 0.5 * (next_p + next_p.transpose());
  if (!next_coef.allFinite() || !next_p.allFinite()) return false;

  coef_ = std::move(next_coef);
  p_ = std::move(next_p);
  gain_ = k;
  ++updates_;
  return true;
}

double RlsEstimator::predict(std::span<const double> row) const {
  if (static_cast<int>(row.size()) != dim()) throw std::invalid_argument("rls: dimension mismatch");
  const Eigen::Map<const Eigen::VectorXd> a(row.data(), dim());
  return a.dot(coef_);
}

}  // namespace cdasim
