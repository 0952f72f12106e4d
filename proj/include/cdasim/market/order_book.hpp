#pragma once

#include <cstddef>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "cdasim/market/types.hpp"

namespace cdasim {

enum class BookError : std::uint8_t { none, invalid_quantity, invalid_price, wrong_kind };

std::string_view to_string(BookError e);

struct Execution {
  BookError error = BookError::none;
  std::vector<Trade> trades;
  Quantity filled = 0;
  Quantity unfilled = 0;          // market orders: discarded remainder
  std::optional<Order> resting;   // limit orders: remainder now in the book

  bool ok() const { return error == BookError::none; }
};

struct Quote {
  std::optional<Price> bid;
  std::optional<Price> ask;
  std::optional<MidPrice> mid;

  bool operator==(const Quote&) const = default;
};

struct DepthLevel {
  Price price{};
  Quantity quantity = 0;
  std::size_t order_count = 0;

  bool operator==(const DepthLevel&) const = default;
};

struct Depth {
  std::vector<DepthLevel> bids;  // best first
  std::vector<DepthLevel> asks;  // best first

  bool operator==(const Depth&) const = default;
};

// Price-time priority limit order book for a single asset. Not thread-safe;
// the owner serializes mutations.
class OrderBook {
 public:
  explicit OrderBook(AssetId asset) : asset_(asset) {}

  AssetId asset() const { return asset_; }

  Execution place_limit(const Order& order);

  // Sweeps the opposite side; the remainder is discarded. A notional cap (in
  // cents) stops the sweep once the next share would exceed it.
  Execution place_market(const Order& order, std::optional<Money> notional_cap = std::nullopt);

  // Remaining quantity of the removed order, or 0 if it no longer rests.
  Quantity cancel(OrderId target);

  Quote best_quote() const;
  Depth depth_snapshot(std::size_t max_levels) const;

  std::optional<Order> find(OrderId id) const;
  std::size_t resting_count() const { return index_.size(); }
  bool empty() const { return index_.empty(); }

  // Resting orders in priority order per side (bids first).
  std::vector<Order> resting_orders() const;

  // Re-inserts a resting order verbatim (snapshot restore). Seq order within a
  // level must be respected by the caller.
  void restore_resting(const Order& order);

  Seq next_trade_seq() const { return next_trade_seq_; }
  void set_next_trade_seq(Seq s) { next_trade_seq_ = s; }

 private:
  using Queue = std::list<Order>;
  using BidLevels = std::map<std::int64_t, Queue, std::greater<>>;
  using AskLevels = std::map<std::int64_t, Queue, std::less<>>;

  struct Locator {
    Side side;
    std::int64_t price;
    Queue::iterator it;
  };

  template <typename Levels>
  void sweep(Levels& levels, Order& taker, std::optional<std::int64_t> limit_ticks,
             std::optional<Money> notional_cap, Execution& out);

  void rest(const Order& order);

  AssetId asset_;
  BidLevels bids_;
  AskLevels asks_;
  std::unordered_map<OrderId, Locator> index_;
  Seq next_trade_seq_ = 1;
};

}  // namespace cdasim
