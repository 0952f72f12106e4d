#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cdasim {

using OrderId = std::uint64_t;
using AccountId = std::uint64_t;
using AssetId = std::uint32_t;
using Seq = std::uint64_t;
using Quantity = std::int64_t;

// Fixed-point currency in hundredths. One price tick is one hundredth, so a
// notional is simply ticks * shares.
struct Money {
  std::int64_t cents = 0;

  constexpr Money() = default;
  constexpr explicit Money(std::int64_t c) : cents(c) {}

  constexpr double value() const { return static_cast<double>(cents) / 100.0; }

  constexpr Money operator+(Money o) const { return Money{cents + o.cents}; }
  constexpr Money operator-(Money o) const { return Money{cents - o.cents}; }
  constexpr Money operator-() const { return Money{-cents}; }
  constexpr Money& operator+=(Money o) { cents += o.cents; return *this; }
  constexpr Money& operator-=(Money o) { cents -= o.cents; return *this; }
  constexpr auto operator<=>(const Money&) const = default;

  // Nearest cent.
  static Money from_double(double v) { return Money{std::llround(v * 100.0)}; }
};

// Price in ticks of 0.01 currency units.
struct Price {
  std::int64_t ticks = 0;

  static constexpr double tick_size = 0.01;

  constexpr Price() = default;
  constexpr explicit Price(std::int64_t t) : ticks(t) {}

  constexpr double value() const { return static_cast<double>(ticks) * tick_size; }
  constexpr bool valid() const { return ticks > 0; }
  constexpr auto operator<=>(const Price&) const = default;

  constexpr Money notional(Quantity qty) const { return Money{ticks * qty}; }

  // Agent-computed prices snap toward the passive side: bids down, asks up.
  // The small slack absorbs binary noise on prices that are already on-tick.
  static Price round_down(double v) { return Price{static_cast<std::int64_t>(std::floor(v / tick_size + 1e-7))}; }
  static Price round_up(double v) { return Price{static_cast<std::int64_t>(std::ceil(v / tick_size - 1e-7))}; }
};

// Midpoint of two tick prices, held exactly as a sum of ticks (half-tick
// resolution).
struct MidPrice {
  std::int64_t tick_sum = 0;

  static constexpr MidPrice of(Price bid, Price ask) { return MidPrice{bid.ticks + ask.ticks}; }
  constexpr double value() const { return static_cast<double>(tick_sum) * Price::tick_size / 2.0; }
  constexpr auto operator<=>(const MidPrice&) const = default;
};

enum class Side : std::uint8_t { buy, sell };
enum class OrderKind : std::uint8_t { limit, market, cancel };

constexpr Side opposite(Side s) { return s == Side::buy ? Side::sell : Side::buy; }

std::string_view to_string(Side s);
std::string_view to_string(OrderKind k);
std::optional<Side> parse_side(std::string_view s);
std::optional<OrderKind> parse_order_kind(std::string_view s);

// Decimal renderings used by every file and wire format: "100.50", "-20.00",
// mid prices with three decimals ("100.005").
std::string format_price(Price p);
std::string format_money(Money m);
std::string format_mid(MidPrice m);
std::optional<Price> parse_price(std::string_view s);
std::optional<Money> parse_money(std::string_view s);
std::optional<MidPrice> parse_mid(std::string_view s);

struct Order {
  OrderId id = 0;
  AccountId account = 0;
  AssetId asset = 0;
  Side side = Side::buy;
  OrderKind kind = OrderKind::limit;
  Quantity quantity = 0;
  Price limit_price{};   // limit orders only
  OrderId target = 0;    // cancel orders only
  Seq seq = 0;           // arrival sequence, defines time priority

  bool operator==(const Order&) const = default;
};

// trade_id and seq coincide: both are the per-book execution counter.
struct Trade {
  Seq seq = 0;
  AssetId asset = 0;
  Price price{};
  Quantity quantity = 0;
  OrderId maker_order = 0;
  OrderId taker_order = 0;
  AccountId maker_account = 0;
  AccountId taker_account = 0;
  Side taker_side = Side::buy;

  bool operator==(const Trade&) const = default;

  AccountId buyer() const { return taker_side == Side::buy ? taker_account : maker_account; }
  AccountId seller() const { return taker_side == Side::buy ? maker_account : taker_account; }
};

// `seq,asset,price,qty,maker_order,taker_order,maker_acct,taker_acct`
std::string to_log_record(const Trade& t);

}  // namespace cdasim
