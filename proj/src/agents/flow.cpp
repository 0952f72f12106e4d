#include "cdasim/agents/flow.hpp"

#include <algorithm>
#include <cmath>

namespace cdasim::agents {

double reference_spread(Price bid, Price ask) {
  return std::max((ask.value() - bid.value()) / 2.0, Price::tick_size);
}

double reference_spread(const Quote& q) {
  return q.bid && q.ask ? reference_spread(*q.bid, *q.ask) : Price::tick_size;
}

std::vector<MarketOrderIntent> lt_step(const LtView& view, double wealth_fraction, std::span<const double> weights) {
  double risky = view.cash;
  for (std::size_t k = 0; k < view.mids.size(); ++k)
    if (view.mids[k]) risky += static_cast<double>(view.holdings[k]) * *view.mids[k];
  risky *= wealth_fraction;

  std::vector<MarketOrderIntent> out;
  for (std::size_t k = 0; k < view.mids.size(); ++k) {
    if (!view.mids[k] || *view.mids[k] <= 0.0) continue;
    const auto desired = static_cast<Quantity>(std::floor(weights[k] * risky / *view.mids[k]));
    const Quantity delta = desired - view.holdings[k];
    if (delta > 0) out.push_back({static_cast<AssetId>(k), Side::buy, delta});
    if (delta < 0) out.push_back({static_cast<AssetId>(k), Side::sell, -delta});
  }
  return out;
}

std::vector<LimitOrderIntent> lp_step(const LpView& view, const LpDraws& draws) {
  const std::size_t n = view.assets.size();
  std::vector<LimitOrderIntent> out;
  std::vector<double> target(n, 0.0);
  std::vector<bool> buy_eligible(n, false);
  const double cash = view.cash.value();

  for (std::size_t k = 0; k < n; ++k) {
    const LpAssetView& a = view.assets[k];
    if (!a.mid) continue;
    target[k] = *a.mid * (1.0 + draws.price_shock[k]);
    if (a.shares > 0 && *a.mid < target[k]) {
      const auto qty = static_cast<Quantity>(std::floor(draws.sell_fraction[k] * static_cast<double>(a.shares)));
      const double px = a.ask ? std::max(a.ask->value(), target[k]) : target[k];
      const Price price = Price::round_up(px);
      if (qty > 0 && price.valid()) out.push_back({static_cast<AssetId>(k), Side::sell, qty, price});
    } else if (cash > *a.mid) {
      buy_eligible[k] = true;
    }
  }

  double weight_sum = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (buy_eligible[k]) weight_sum += draws.cash_weight[k];
  if (weight_sum <= 0.0) return out;

  std::int64_t budget = view.cash.cents;
  for (std::size_t k = 0; k < n; ++k) {
    if (!buy_eligible[k]) continue;
    const LpAssetView& a = view.assets[k];
    const double px = a.bid ? std::min(a.bid->value(), target[k]) : target[k];
    const Price price = Price::round_down(px);
    if (!price.valid()) continue;
    const double share = draws.cash_weight[k] / weight_sum;
    auto qty = static_cast<Quantity>(std::floor(share * static_cast<double>(view.cash.cents) / static_cast<double>(price.ticks)));
    qty = std::min(qty, budget / price.ticks);  // exact integer guard against rounding in share
    if (qty <= 0) continue;
    budget -= qty * price.ticks;
    out.push_back({static_cast<AssetId>(k), Side::buy, qty, price});
  }
  return out;
}

Price quote_bid(double mid, double ref_spread, double eps) { return Price::round_down(mid - ref_spread * (1.0 + eps)); }
Price quote_ask(double mid, double ref_spread, double eps) { return Price::round_up(mid + ref_spread * (1.0 + eps)); }

std::optional<MarketOrderIntent> hedge_order(AssetId asset, Quantity inventory, double fraction) {
  if (inventory == 0) return std::nullopt;
  const auto qty = static_cast<Quantity>(std::floor(fraction * static_cast<double>(std::abs(inventory))));
  if (qty <= 0) return std::nullopt;
  return MarketOrderIntent{asset, inventory > 0 ? Side::sell : Side::buy, qty};
}

MmQuotes mm_step(AssetId asset, const Quote& quote, Quantity inventory, Quantity order_size, double eps_buy,
                 double eps_sell, double hedge_fraction) {
  return mm_step(asset, quote.mid->value(), reference_spread(quote), inventory, order_size, eps_buy, eps_sell,
                 hedge_fraction);
}

MmQuotes mm_step(AssetId asset, double mid, double sref, Quantity inventory, Quantity order_size, double eps_buy,
                 double eps_sell, double hedge_fraction) {
  MmQuotes q;
  q.bid = {asset, Side::buy, order_size, quote_bid(mid, sref, eps_buy)};
  q.ask = {asset, Side::sell, order_size, quote_ask(mid, sref, eps_sell)};
  q.hedge = hedge_order(asset, inventory, hedge_fraction);
  return q;
}

}  // namespace cdasim::agents
