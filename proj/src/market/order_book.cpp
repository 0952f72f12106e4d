#include "cdasim/market/order_book.hpp"

#include <algorithm>

namespace cdasim {

std::string_view to_string(BookError e) {
  switch (e) {
    case BookError::none: return "none";
    case BookError::invalid_quantity: return "invalid_quantity";
    case BookError::invalid_price: return "invalid_price";
    case BookError::wrong_kind: return "wrong_kind";
  }
  return "unknown";
}

template <typename Levels>
void OrderBook::sweep(Levels& levels, Order& taker, std::optional<std::int64_t> limit_ticks,
                      std::optional<Money> notional_cap, Execution& out) {
  std::int64_t budget = notional_cap ? notional_cap->cents : 0;

  while (taker.quantity > 0 && !levels.empty()) {
    auto level = levels.begin();
    const std::int64_t px = level->first;
    if (limit_ticks) {
      const bool marketable = taker.side == Side::buy ? px <= *limit_ticks : px >= *limit_ticks;
      if (!marketable) break;
    }
    Queue& queue = level->second;
    while (taker.quantity > 0 && !queue.empty()) {
      Order& maker = queue.front();
      Quantity qty = std::min(taker.quantity, maker.quantity);
      if (notional_cap) {
        qty = std::min(qty, budget / px);
        if (qty <= 0) return;
        budget -= qty * px;
      }
      out.trades.push_back(Trade{next_trade_seq_++, asset_, Price{px}, qty, maker.id, taker.id,
                                 maker.account, taker.account, taker.side});
      out.filled += qty;
      taker.quantity -= qty;
      maker.quantity -= qty;
      if (maker.quantity == 0) {
        index_.erase(maker.id);
        queue.pop_front();
      }
    }
    if (queue.empty()) levels.erase(level);
  }
}

void OrderBook::rest(const Order& order) {
  if (order.side == Side::buy) {
    Queue& q = bids_[order.limit_price.ticks];
    q.push_back(order);
    index_[order.id] = Locator{Side::buy, order.limit_price.ticks, std::prev(q.end())};
  } else {
    Queue& q = asks_[order.limit_price.ticks];
    q.push_back(order);
    index_[order.id] = Locator{Side::sell, order.limit_price.ticks, std::prev(q.end())};
  }
}

Execution OrderBook::place_limit(const Order& order) {
  Execution out;
  if (order.kind != OrderKind::limit) { out.error = BookError::wrong_kind; return out; }
  if (order.quantity <= 0) { out.error = BookError::invalid_quantity; return out; }
  if (!order.limit_price.valid()) { out.error = BookError::invalid_price; return out; }

  Order taker = order;
  if (taker.side == Side::buy) {
    sweep(asks_, taker, taker.limit_price.ticks, std::nullopt, out);
  } else {
    sweep(bids_, taker, taker.limit_price.ticks, std::nullopt, out);
  }
  if (taker.quantity > 0) {
    rest(taker);
    out.resting = taker;
  }
  return out;
}

Execution OrderBook::place_market(const Order& order, std::optional<Money> notional_cap) {
  Execution out;
  if (order.kind != OrderKind::market) { out.error = BookError::wrong_kind; return out; }
  if (order.quantity <= 0) { out.error = BookError::invalid_quantity; return out; }

  Order taker = order;
  if (taker.side == Side::buy) {
    sweep(asks_, taker, std::nullopt, notional_cap, out);
  } else {
    sweep(bids_, taker, std::nullopt, notional_cap, out);
  }
  out.unfilled = taker.quantity;
  return out;
}

Quantity OrderBook::cancel(OrderId target) {
  auto found = index_.find(target);
  if (found == index_.end()) return 0;
  const Locator loc = found->second;
  const Quantity remaining = loc.it->quantity;
  if (loc.side == Side::buy) {
    auto level = bids_.find(loc.price);
    level->second.erase(loc.it);
    if (level->second.empty()) bids_.erase(level);
  } else {
    auto level = asks_.find(loc.price);
    level->second.erase(loc.it);
    if (level->second.empty()) asks_.erase(level);
  }
  index_.erase(found);
  return remaining;
}

Quote OrderBook::best_quote() const {
  Quote q;
  if (!bids_.empty()) q.bid = Price{bids_.begin()->first};
  if (!asks_.empty()) q.ask = Price{asks_.begin()->first};
  if (q.bid && q.ask) q.mid = MidPrice::of(*q.bid, *q.ask);
  return q;
}

namespace {

template <typename Levels>
std::vector<DepthLevel> collect_levels(const Levels& levels, std::size_t max_levels) {
  std::vector<DepthLevel> out;
  for (const auto& [px, queue] : levels) {
    if (out.size() >= max_levels) break;
    DepthLevel lvl{Price{px}, 0, queue.size()};
    for (const Order& o : queue) lvl.quantity += o.quantity;
    out.push_back(lvl);
  }
  return out;
}

}  // namespace

Depth OrderBook::depth_snapshot(std::size_t max_levels) const {
  return Depth{collect_levels(bids_, max_levels), collect_levels(asks_, max_levels)};
}

std::optional<Order> OrderBook::find(OrderId id) const {
  auto found = index_.find(id);
  if (found == index_.end()) return std::nullopt;
  return *found->second.it;
}

std::vector<Order> OrderBook::resting_orders() const {
  std::vector<Order> out;
  out.reserve(index_.size());
  for (const auto& [px, queue] : bids_) out.insert(out.end(), queue.begin(), queue.end());
  for (const auto& [px, queue] : asks_) out.insert(out.end(), queue.begin(), queue.end());
  return out;
}

void OrderBook::restore_resting(const Order& order) { rest(order); }

}  // namespace cdasim
