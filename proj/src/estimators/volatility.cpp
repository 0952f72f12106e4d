#include "cdasim/estimators/volatility.hpp"

#include <cmath>
#include <stdexcept>

namespace cdasim {

double realized_volatility(std::span<const double> prices) {
  if (prices.size() < 2) throw std::invalid_argument("realized_volatility: need at least two prices");
  for (double p : prices)
    if (!(p > 0.0)) throw std::invalid_argument("realized_volatility: prices must be positive");

  const std::size_t n = prices.size() - 1;
  double mean = 0.0;
  for (std::size_t i = 1; i <= n; ++i) mean += std::log(prices[i]) - std::log(prices[i - 1]);
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double d = std::log(prices[i]) - std::log(prices[i - 1]) - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n));
}

double ia_sigma(double sigma_returns, double delta_mid) {
  return sigma_returns * std::sqrt(std::fabs(delta_mid));
}

}  // namespace cdasim
