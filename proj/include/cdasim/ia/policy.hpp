#pragma once

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

#include "cdasim/estimators/moments.hpp"
#include "cdasim/estimators/rls.hpp"
#include "cdasim/market/types.hpp"

namespace cdasim::ia {

struct IaConfig {
  double target_share = 0.25;
  double tolerance = 0.05;
  double risk_aversion = 2.0;
  Quantity inventory_limit = 3000;
  Quantity order_size = 100;
  double t_freq = 2.0;
  double eps_min = -0.5;
  double eps_max = 1.0;
  double eps_step = 0.01;
  double hedge_step = 0.01;
  double watchdog = 30.0;  // simulated seconds without volume before a forced refresh

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

// Evenly spaced closed interval [lo, hi].
struct Grid {
  double lo = 0.0;
  double hi = 1.0;
  double step = 0.01;

  std::size_t size() const;
  double at(std::size_t i) const { return lo + static_cast<double>(i) * step; }
};

using Curve = std::function<double(double eps)>;

// Step 1: among grid points whose share of market volume is within the
// tolerance of the target, the most passive; otherwise the closest miss.
// A market volume of zero carries no information and returns `previous`.
double solve_target_eps(const Grid& grid, const Curve& expected_flow, double market_volume, double target_share,
                        double tolerance, double previous);

struct SkewInputs {
  double ref_spread = 0.0;
  double risk_aversion = 0.0;
  double var_pnl = 0.0;
  double var_flow = 0.0;
  double sigma = 0.0;
  double inventory = 0.0;
  double flow_sign = 1.0;  // +1 when the skewed quote is a bid, -1 for an ask
};

// Risk-adjusted spread objective; +inf where the risk term is undefined.
double skew_objective(double eps, const Curve& expected_pnl, const Curve& expected_flow, const SkewInputs& in);

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Step 2: grid argmin of the skew objective. Throws SolverError when no grid
// point is finite.
double solve_skew_eps(const Grid& grid, const Curve& expected_pnl, const Curve& expected_flow, const SkewInputs& in);

struct HedgeInputs {
  double inventory = 0.0;
  double ref_spread = 0.0;
  double risk_aversion = 0.0;
  double sigma = 0.0;
  double expected_flow = 0.0;
  double var_flow = 0.0;
  double inventory_limit = 3000.0;
  double flow_sign = 1.0;
};

double hedge_objective(double fraction, const HedgeInputs& in);

// Fraction of inventory to trade away, on a [0, 1] grid, keeping the
// remaining inventory inside the limit.
double solve_hedge_fraction(double step, const HedgeInputs& in);

struct Observation {
  double mid = 0.0;
  double ref_spread = 0.0;
  double eps = 0.0;
  double flow = 0.0;
};

// The agent's learned flow and spread-PnL models plus their running moments.
class IaModels {
 public:
  IaModels() : flow_(FeatureRow::flow_dim), pnl_(FeatureRow::pnl_dim) {}

  double expected_flow(double mid, double ref_spread, double eps) const;
  double expected_pnl(double mid, double ref_spread, double eps) const;
  double var_flow() const { return flow_moments_.count() ? flow_moments_.variance() : 0.0; }
  double var_pnl() const { return pnl_moments_.count() ? pnl_moments_.variance() : 0.0; }

  // One quoted side: realized flow nu at tweak eps; s = nu (1 + eps).
  void observe(double mid, double ref_spread, double eps, double flow);

  const RlsEstimator& flow_model() const { return flow_; }
  const RlsEstimator& pnl_model() const { return pnl_; }
  const OnlineMoments& flow_moments() const { return flow_moments_; }
  const OnlineMoments& pnl_moments() const { return pnl_moments_; }
  const std::vector<Observation>& observations() const { return rows_; }

 private:
  RlsEstimator flow_;
  RlsEstimator pnl_;
  OnlineMoments flow_moments_;
  OnlineMoments pnl_moments_;
  std::vector<Observation> rows_;
};

}  // namespace cdasim::ia
