#include "cdasim/estimators/moments.hpp"

#include <stdexcept>

namespace cdasim {

void OnlineMoments::add(double x) {
  ++count_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(count_);
  m2_ += delta * (x - mean_);
}

void OnlineMoments::merge(const OnlineMoments& other) {
  if (other.count_ == 0) return;
  if (count_ == 0) { *this = other; return; }
  const double n_a = static_cast<double>(count_);
  const double n_b = static_cast<double>(other.count_);
  const double n = n_a + n_b;
  const double delta = other.mean_ - mean_;
  mean_ += delta * n_b / n;
  m2_ += other.m2_ + delta * delta * n_a * n_b / n;
  count_ += other.count_;
}

double OnlineMoments::variance() const {
  if (count_ == 0) throw std::domain_error("variance of an empty set");
  const double v = m2_ / static_cast<double>(count_);
  return v < 0.0 ? 0.0 : v;
}

}  // namespace cdasim
