#pragma once

#include <cstdint>

namespace cdasim {

// Welford/Knuth running mean and population variance.
class OnlineMoments {
 public:
  void add(double x);

  // Chan et al. pairwise combination; equivalent to streaming the
  // concatenation of both inputs.
  void merge(const OnlineMoments& other);

  std::int64_t count() const { return count_; }
  double mean() const { return mean_; }
  double m2() const { return m2_; }

  // Population variance (M2 / n). Throws std::domain_error when empty.
  double variance() const;

 private:
  std::int64_t count_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

}  // namespace cdasim
