#include "cdasim/ia/agent.hpp"

#include <cmath>

#include <fmt/format.h>

#include "cdasim/agents/actors.hpp"
#include "cdasim/agents/flow.hpp"
#include "cdasim/estimators/volatility.hpp"
#include "cdasim/protocol/messages.hpp"

namespace cdasim::ia {

namespace {
constexpr std::size_t kMidWindow = 100;
}

std::string diagnostics_csv(const std::vector<Diagnostics>& rows) {
  std::string out = "t,eps_star,eps_skew,x_hedge,z,cash,E_nu,E_s\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{},{},{},{}\n", protocol::format_number(r.time), protocol::format_number(r.eps_star),
                       protocol::format_number(r.eps_skew), protocol::format_number(r.hedge_fraction), r.inventory,
                       format_money(r.cash), protocol::format_number(r.expected_flow),
                       protocol::format_number(r.expected_pnl));
  }
  return out;
}

IntelligentAgent::IntelligentAgent(std::size_t index, std::unique_ptr<protocol::ClientSession> session, AssetId asset,
                                   IaConfig config)
    : Agent(agents::Role::intelligent, index, std::move(session)), asset_(asset), config_(config) {
  config_.validate();
}

void IntelligentAgent::act(double now) {
  if (now < next_poll_) return;
  if (waiting_) {
    const Quantity volume = session().get_volume(asset_);
    if (volume == volume_baseline_ && now - quoted_at_ < config_.watchdog) {
      next_poll_ = now + config_.t_freq;
      return;
    }
    complete_cycle(volume);
  }
  start_cycle(now);
}

void IntelligentAgent::complete_cycle(Quantity volume_now) {
  market_volume_ = static_cast<double>(volume_now - volume_baseline_);
  for (auto* side : {&bid_, &ask_}) {
    if (!*side) continue;
    const LiveQuote& q = **side;
    const Quantity cancelled = q.resting > 0 ? session().cancel_order(q.order) : 0;
    const auto flow = static_cast<double>(config_.order_size - cancelled);
    models_.observe(quote_mid_, quote_sref_, q.eps, flow);
    side->reset();
  }
  waiting_ = false;
  ++cycles_;
}

void IntelligentAgent::start_cycle(double now) {
  const Quote q = session().get_quote(asset_).quote;
  const auto reference = agents::reference_mid(session(), asset_, q);
  if (!reference) {
    next_poll_ = now + config_.t_freq;
    return;
  }
  count_activation();
  const double mid = *reference;
  const double sref = agents::reference_spread(q);

  mids_.push_back(mid);
  if (mids_.size() > kMidWindow) mids_.pop_front();
  double sigma_returns = 0.0;
  if (mids_.size() >= 2) sigma_returns = realized_volatility(std::vector<double>(mids_.begin(), mids_.end()));
  // the mids are sampled once per cycle, so this is the per-cycle move in
  // price units, the same units as the spread pnl it is weighed against
  const double sigma = sigma_returns * mid;

  const Grid grid{config_.eps_min, config_.eps_max, config_.eps_step};
  const Curve flow = [&](double e) { return models_.expected_flow(mid, sref, e); };
  const Curve pnl = [&](double e) { return models_.expected_pnl(mid, sref, e); };

  eps_star_ = solve_target_eps(grid, flow, market_volume_, config_.target_share, config_.tolerance, eps_star_);

  const protocol::AccountView acct = session().get_account();
  const Quantity z = acct.holdings.at(asset_);
  // the skewed side trades against the inventory: a bid when flat or short
  const double flow_sign = z > 0 ? -1.0 : 1.0;
  const SkewInputs skew_in{sref, config_.risk_aversion, models_.var_pnl(), models_.var_flow(), sigma,
                           static_cast<double>(z), flow_sign};
  const double eps_skew = solve_skew_eps(grid, pnl, flow, skew_in);

  // long inventory: keep the bid at the target, skew the ask to shed shares
  const double eps_bid = z > 0 ? eps_star_ : eps_skew;
  const double eps_ask = z > 0 ? eps_skew : eps_star_;
  quote_mid_ = mid;
  quote_sref_ = sref;

  const Price bid_px = agents::quote_bid(mid, sref, eps_bid);
  const Price ask_px = agents::quote_ask(mid, sref, eps_ask);
  if (bid_px.valid()) {
    const auto ack = session().submit_limit(asset_, Side::buy, config_.order_size, bid_px);
    if (ack.accepted) bid_ = LiveQuote{ack.order_id, eps_bid, ack.resting, ack.filled};
  }
  const auto ack = session().submit_limit(asset_, Side::sell, config_.order_size, ask_px);
  if (ack.accepted) ask_ = LiveQuote{ack.order_id, eps_ask, ack.resting, ack.filled};

  const HedgeInputs hedge_in{static_cast<double>(z), sref, config_.risk_aversion, sigma,
                             flow(eps_skew), models_.var_flow(), static_cast<double>(config_.inventory_limit), flow_sign};
  const double x = solve_hedge_fraction(config_.hedge_step, hedge_in);
  if (auto hedge = agents::hedge_order(asset_, z, x)) session().submit_market(asset_, hedge->side, hedge->quantity);

  volume_baseline_ = session().get_volume(asset_);
  waiting_ = true;
  quoted_at_ = now;
  next_poll_ = now + config_.t_freq;

  diag_.push_back(Diagnostics{now, eps_star_, eps_skew, x, z, acct.cash, flow(eps_star_), pnl(eps_skew)});
}

}  // namespace cdasim::ia
