#include "cdasim/ia/policy.hpp"

#include <cmath>
#include <limits>

namespace cdasim::ia {

void IaConfig::validate() const {
  if (!(target_share > 0.0 && target_share < 1.0)) throw std::invalid_argument("target_share");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance");
  if (!(risk_aversion >= 0.0)) throw std::invalid_argument("risk_aversion");
  if (inventory_limit <= 0) throw std::invalid_argument("inventory_limit");
  if (order_size < 1) throw std::invalid_argument("order_size");
  if (!(t_freq > 0.0)) throw std::invalid_argument("t_freq");
  if (!(eps_min < eps_max) || eps_min <= -1.0) throw std::invalid_argument("eps_min");
  if (!(eps_step > 0.0)) throw std::invalid_argument("eps_step");
  if (!(hedge_step > 0.0 && hedge_step <= 1.0)) throw std::invalid_argument("hedge_step");
  if (!(watchdog > 0.0)) throw std::invalid_argument("watchdog");
}

std::size_t Grid::size() const { return static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1; }

double solve_target_eps(const Grid& grid, const Curve& expected_flow, double market_volume, double target_share,
                        double tolerance, double previous) {
  if (!(market_volume > 0.0)) return previous;
  double best_feasible = 0.0;
  bool any_feasible = false;
  double argmin = grid.at(0);
  double min_cost = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid.at(i);
    const double cost = std::abs(target_share - expected_flow(eps) / market_volume);
    if (!std::isfinite(cost)) continue;
    if (cost <= tolerance) {
      best_feasible = eps;  // grid ascends, so the last feasible point is the most passive
      any_feasible = true;
    }
    if (cost < min_cost) {
      min_cost = cost;
      argmin = eps;
    }
  }
  return any_feasible ? best_feasible : argmin;
}

double skew_objective(double eps, const Curve& expected_pnl, const Curve& expected_flow, const SkewInputs& in) {
  const double drift = in.inventory + in.flow_sign * expected_flow(eps);
  const double second_moment = drift * drift + in.var_flow;
  const double risk = in.ref_spread * in.ref_spread * in.var_pnl + in.sigma * in.sigma * second_moment;
  if (!(risk >= 0.0)) return std::numeric_limits<double>::infinity();
  const double j = -in.ref_spread * expected_pnl(eps) + in.risk_aversion * std::sqrt(risk);
  return std::isfinite(j) ? j : std::numeric_limits<double>::infinity();
}

double solve_skew_eps(const Grid& grid, const Curve& expected_pnl, const Curve& expected_flow, const SkewInputs& in) {
  double best = 0.0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double eps = grid.at(i);
    const double j = skew_objective(eps, expected_pnl, expected_flow, in);
    if (j < best_val) {
      best_val = j;
      best = eps;
    }
  }
  if (!std::isfinite(best_val)) throw SolverError("skew objective is not finite anywhere on the grid");
  return best;
}

double hedge_objective(double fraction, const HedgeInputs& in) {
  const double remaining = in.inventory * (1.0 - fraction);
  const double drift = remaining + in.flow_sign * in.expected_flow;
  const double second_moment = drift * drift + in.var_flow;
  return std::abs(fraction * in.inventory) * in.ref_spread +
         in.risk_aversion * std::sqrt(in.sigma * in.sigma * second_moment);
}

double solve_hedge_fraction(double step, const HedgeInputs& in) {
  if (in.inventory == 0.0) return 0.0;
  const Grid grid{0.0, 1.0, step};
  double best = 1.0;
  double best_val = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.at(i);
    // tiny slack so a binding limit admits the exact grid point
    if (std::abs(in.inventory * (1.0 - x)) > in.inventory_limit + 1e-9) continue;
    const double h = hedge_objective(x, in);
    if (h < best_val) {
      best_val = h;
      best = x;
    }
  }
  return best;
}

double IaModels::expected_flow(double mid, double ref_spread, double eps) const {
  return flow_.predict(FeatureRow::flow(mid, ref_spread, eps));
}

double IaModels::expected_pnl(double mid, double ref_spread, double eps) const {
  return pnl_.predict(FeatureRow::pnl(mid, ref_spread, eps));
}

void IaModels::observe(double mid, double ref_spread, double eps, double flow) {
  const double pnl = flow * (1.0 + eps);
  if (!flow_.update(FeatureRow::flow(mid, ref_spread, eps), flow)) return;
  pnl_.update(FeatureRow::pnl(mid, ref_spread, eps), pnl);
  flow_moments_.add(flow);
  pnl_moments_.add(pnl);
  rows_.push_back(Observation{mid, ref_spread, eps, flow});
}

}  // namespace cdasim::ia
