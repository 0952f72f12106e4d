#include "cdasim/agents/actors.hpp"

#include <sstream>

#include "cdasim/estimators/volatility.hpp"

namespace cdasim::agents {

std::string_view to_string(Role r) {
  switch (r) {
    case Role::liquidity_taker: return "liquidity_taker";
    case Role::liquidity_provider: return "liquidity_provider";
    case Role::market_maker: return "market_maker";
    case Role::intelligent: return "intelligent";
  }
  return "unknown";
}

namespace {

std::string rng_state(const Rng& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

void load_rng_state(Rng& rng, const std::string& text) {
  std::istringstream in(text);
  in >> rng;
  if (!in) throw std::invalid_argument("bad agent state");
}

}  // namespace

std::optional<double> reference_mid(protocol::ClientSession& session, AssetId asset, const Quote& quote,
                                    const std::vector<protocol::HistoryPoint>* history) {
  if (quote.mid) return quote.mid->value();
  if (history) return history->empty() ? std::nullopt : std::optional(history->back().mid.value());
  const auto last = session.get_history(asset, 0.0, 1);
  if (last.empty()) return std::nullopt;
  return last.back().mid.value();
}

double lp_sigma(const std::vector<protocol::HistoryPoint>& history, double fallback) {
  if (history.size() < 2) return fallback;
  std::vector<double> mids;
  mids.reserve(history.size());
  for (const auto& p : history) mids.push_back(p.mid.value());
  const double s = realized_volatility(mids);
  return s > 0.0 ? s : fallback;
}

// ---- liquidity taker ----

LiquidityTaker::LiquidityTaker(std::size_t index, std::unique_ptr<protocol::ClientSession> session, Rng rng,
                               double t_freq, std::size_t assets)
    : Agent(Role::liquidity_taker, index, std::move(session)), rng_(rng), gate_{t_freq}, assets_(assets) {}

void LiquidityTaker::decide(double) {
  planned_.clear();
  if (!gate_.fires(uniform01(rng_))) return;
  count_activation();
  const double fraction = uniform01(rng_);
  const std::vector<double> weights = flat_dirichlet(rng_, assets_);

  const protocol::AccountView acct = session().get_account();
  LtView view;
  view.cash = acct.available_cash().value();
  for (std::size_t k = 0; k < assets_; ++k) {
    view.holdings.push_back(acct.available_shares(static_cast<AssetId>(k)));
    // no fallback here: a taker skips an asset whose book is one-sided
    const Quote q = session().get_quote(static_cast<AssetId>(k)).quote;
    view.mids.push_back(q.mid ? std::optional(q.mid->value()) : std::nullopt);
  }
  planned_ = lt_step(view, fraction, weights);
}

void LiquidityTaker::act(double) {
  for (const auto& o : planned_) session().submit_market(o.asset, o.side, o.quantity);
  planned_.clear();
}

std::string LiquidityTaker::serialize() const { return rng_state(rng_); }
void LiquidityTaker::restore(const std::string& state) { load_rng_state(rng_, state); }

// ---- liquidity provider ----

LiquidityProvider::LiquidityProvider(std::size_t index, std::unique_ptr<protocol::ClientSession> session, Rng rng,
                                     double t_freq, std::size_t assets, LpParams params)
    : Agent(Role::liquidity_provider, index, std::move(session)),
      rng_(rng),
      gate_{t_freq},
      assets_(assets),
      params_(params) {}

void LiquidityProvider::decide(double) {
  planned_.clear();
  if (!gate_.fires(uniform01(rng_))) return;
  count_activation();

  const protocol::AccountView acct = session().get_account();
  LpView view;
  view.cash = acct.available_cash();
  LpDraws draws;
  std::normal_distribution<double> n01(0.0, 1.0);
  for (std::size_t k = 0; k < assets_; ++k) {
    const auto asset = static_cast<AssetId>(k);
    const Quote q = session().get_quote(asset).quote;
    const auto history = session().get_history(asset, 0.0, params_.window);
    view.assets.push_back(LpAssetView{q.bid, q.ask, reference_mid(session(), asset, q, &history),
                                      acct.available_shares(asset)});
    const double sigma = lp_sigma(history, params_.sigma_fallback);
    draws.price_shock.push_back(sigma * n01(rng_));
    draws.sell_fraction.push_back(uniform01(rng_));
  }
  draws.cash_weight = exponential_draws(rng_, assets_);
  planned_ = lp_step(view, draws);
}

void LiquidityProvider::act(double) {
  for (const auto& o : planned_) session().submit_limit(o.asset, o.side, o.quantity, o.price);
  planned_.clear();
}

std::string LiquidityProvider::serialize() const { return rng_state(rng_); }
void LiquidityProvider::restore(const std::string& state) { load_rng_state(rng_, state); }

// ---- market maker ----

MarketMaker::MarketMaker(std::size_t index, std::unique_ptr<protocol::ClientSession> session, Rng rng, double t_freq,
                         std::size_t assets, MmParams params)
    : Agent(Role::market_maker, index, std::move(session)), rng_(rng), gate_{t_freq}, assets_(assets), params_(params) {}

void MarketMaker::decide(double) { active_ = gate_.fires(uniform01(rng_)); }

void MarketMaker::act(double) {
  // the pause is over: withdraw last activation's unfilled quotes
  for (OrderId id : live_) session().cancel_order(id);
  live_.clear();
  if (!active_) return;
  count_activation();

  std::uniform_real_distribution<double> eps(params_.eps_min, params_.eps_max);
  const protocol::AccountView acct = session().get_account();
  for (std::size_t k = 0; k < assets_; ++k) {
    const auto asset = static_cast<AssetId>(k);
    const double eps_buy = eps(rng_);
    const double eps_sell = eps(rng_);
    const double hedge_fraction = uniform01(rng_);
    const Quote q = session().get_quote(asset).quote;
    const auto mid = reference_mid(session(), asset, q);
    if (!mid) continue;
    const MmQuotes plan = mm_step(asset, *mid, reference_spread(q), acct.holdings[k], params_.order_size, eps_buy,
                                  eps_sell, hedge_fraction);
    for (const auto& lo : {plan.bid, plan.ask}) {
      const protocol::OrderAck ack = session().submit_limit(lo.asset, lo.side, lo.quantity, lo.price);
      if (ack.accepted && ack.resting > 0) live_.push_back(ack.order_id);
    }
    if (plan.hedge) session().submit_market(plan.hedge->asset, plan.hedge->side, plan.hedge->quantity);
  }
}

}  // namespace cdasim::agents
