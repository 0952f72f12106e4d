#include "cdasim/market/types.hpp"

#include <charconv>
#include <cstdlib>

#include <fmt/format.h>

namespace cdasim {

std::string_view to_string(Side s) { return s == Side::buy ? "buy" : "sell"; }

std::string_view to_string(OrderKind k) {
  switch (k) {
    case OrderKind::limit: return "limit";
    case OrderKind::market: return "market";
    case OrderKind::cancel: return "cancel";
  }
  return "unknown";
}

std::optional<Side> parse_side(std::string_view s) {
  if (s == "buy") return Side::buy;
  if (s == "sell") return Side::sell;
  return std::nullopt;
}

std::optional<OrderKind> parse_order_kind(std::string_view s) {
  if (s == "limit") return OrderKind::limit;
  if (s == "market") return OrderKind::market;
  if (s == "cancel") return OrderKind::cancel;
  return std::nullopt;
}

namespace {

std::string format_fixed(std::int64_t units, int decimals) {
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const bool neg = units < 0;
  const std::uint64_t mag = neg ? static_cast<std::uint64_t>(-(units + 1)) + 1 : static_cast<std::uint64_t>(units);
  return fmt::format("{}{}.{:0{}}", neg ? "-" : "", mag / scale, mag % scale, decimals);
}

// Parses "[-]int[.frac]" with at most `decimals` fractional digits into
// integer units of 10^-decimals. Rejects anything else.
std::optional<std::int64_t> parse_fixed(std::string_view s, int decimals) {
  if (s.empty()) return std::nullopt;
  bool neg = false;
  if (s.front() == '-') { neg = true; s.remove_prefix(1); }
  const auto dot = s.find('.');
  std::string_view whole = s.substr(0, dot);
  std::string_view frac = dot == std::string_view::npos ? std::string_view{} : s.substr(dot + 1);
  if (whole.empty() || static_cast<int>(frac.size()) > decimals) return std::nullopt;
  if (dot != std::string_view::npos && frac.empty()) return std::nullopt;
  std::int64_t w = 0;
  auto [p, ec] = std::from_chars(whole.data(), whole.data() + whole.size(), w);
  if (ec != std::errc{} || p != whole.data() + whole.size()) return std::nullopt;
  std::int64_t f = 0;
  if (!frac.empty()) {
    auto [pf, ecf] = std::from_chars(frac.data(), frac.data() + frac.size(), f);
    if (ecf != std::errc{} || pf != frac.data() + frac.size()) return std::nullopt;
  }
  for (int i = static_cast<int>(frac.size()); i < decimals; ++i) f *= 10;
  std::int64_t scale = 1;
  for (int i = 0; i < decimals; ++i) scale *= 10;
  const std::int64_t v = w * scale + f;
  return neg ? -v : v;
}

}  // namespace

std::string format_price(Price p) { return format_fixed(p.ticks, 2); }
std::string format_money(Money m) { return format_fixed(m.cents, 2); }
std::string format_mid(MidPrice m) { return format_fixed(m.tick_sum * 5, 3); }

std::optional<Price> parse_price(std::string_view s) {
  auto v = parse_fixed(s, 2);
  if (!v) return std::nullopt;
  return Price{*v};
}

std::optional<Money> parse_money(std::string_view s) {
  auto v = parse_fixed(s, 2);
  if (!v) return std::nullopt;
  return Money{*v};
}

std::optional<MidPrice> parse_mid(std::string_view s) {
  auto v = parse_fixed(s, 3);
  if (!v || *v % 5 != 0) return std::nullopt;
  return MidPrice{*v / 5};
}

std::string to_log_record(const Trade& t) {
  return fmt::format("{},{},{},{},{},{},{},{}", t.seq, t.asset, format_price(t.price), t.quantity,
                     t.maker_order, t.taker_order, t.maker_account, t.taker_account);
}

}  // namespace cdasim
