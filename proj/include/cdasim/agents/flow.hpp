#pragma once

#include <optional>
#include <span>
#include <vector>

#include "cdasim/market/order_book.hpp"
#include "cdasim/market/types.hpp"

namespace cdasim::agents {

// Fires on a tick iff the uniform draw is below 1 / t_freq.
struct ActivationGate {
  double t_freq = 1.0;
  bool fires(double u) const { return u < 1.0 / t_freq; }
};

struct MarketOrderIntent {
  AssetId asset = 0;
  Side side = Side::buy;
  Quantity quantity = 0;
  bool operator==(const MarketOrderIntent&) const = default;
};

struct LimitOrderIntent {
  AssetId asset = 0;
  Side side = Side::buy;
  Quantity quantity = 0;
  Price price{};
  bool operator==(const LimitOrderIntent&) const = default;
};

// Half the quoted spread, floored at one tick (price units).
double reference_spread(Price bid, Price ask);
// One tick when either side is empty.
double reference_spread(const Quote& q);

// ---- liquidity taker ----

struct LtView {
  double cash = 0.0;
  std::vector<Quantity> holdings;
  std::vector<std::optional<double>> mids;  // empty when the book is one-sided
};

// wealth_fraction ~ U(0,1); weights from a flat Dirichlet over all assets.
// Assets without a mid are skipped and contribute nothing to risky wealth.
std::vector<MarketOrderIntent> lt_step(const LtView& view, double wealth_fraction, std::span<const double> weights);

// ---- liquidity provider ----

struct LpAssetView {
  std::optional<Price> bid;
  std::optional<Price> ask;
  std::optional<double> mid;
  Quantity shares = 0;  // available (unreserved) holdings
};

struct LpView {
  Money cash{};  // available (unreserved) cash
  std::vector<LpAssetView> assets;
};

struct LpDraws {
  std::vector<double> price_shock;     // X per asset, already scaled by that asset's sigma
  std::vector<double> sell_fraction;   // U(0,1) per asset
  std::vector<double> cash_weight;     // Exp(1) per asset; normalized over buy-eligible assets
};

std::vector<LimitOrderIntent> lp_step(const LpView& view, const LpDraws& draws);

// ---- market maker ----

struct MmQuotes {
  LimitOrderIntent bid;
  LimitOrderIntent ask;
  std::optional<MarketOrderIntent> hedge;
};

// Quote prices around the mid at mid -/+ S_ref (1 + eps).
Price quote_bid(double mid, double ref_spread, double eps);
Price quote_ask(double mid, double ref_spread, double eps);

// Hedge of floor(fraction * |inventory|) against the inventory sign.
std::optional<MarketOrderIntent> hedge_order(AssetId asset, Quantity inventory, double fraction);

MmQuotes mm_step(AssetId asset, double mid, double ref_spread, Quantity inventory, Quantity order_size, double eps_buy,
                 double eps_sell, double hedge_fraction);
MmQuotes mm_step(AssetId asset, const Quote& quote, Quantity inventory, Quantity order_size, double eps_buy,
                 double eps_sell, double hedge_fraction);

}  // namespace cdasim::agents
