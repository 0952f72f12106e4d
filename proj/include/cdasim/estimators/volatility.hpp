#pragma once

#include <span>

namespace cdasim {

// Population standard deviation of the log returns of `prices`.
// Throws std::invalid_argument for fewer than two points or non-positive prices.
double realized_volatility(std::span<const double> prices);

// sigma * sqrt(|delta_mid|). The absolute value keeps the estimate real on
// down moves.
double ia_sigma(double sigma_returns, double delta_mid);

}  // namespace cdasim
