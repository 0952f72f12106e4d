#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdasim/market/order_book.hpp"
#include "cdasim/market/types.hpp"
#include "cdasim/protocol/wire.hpp"

namespace cdasim::protocol {

enum class RejectReason : std::uint8_t {
  insufficient_funds,
  insufficient_shares,
  market_closed,
  unknown_asset,
  unknown_account,
  not_owner,
  invalid_order,
};

std::string_view to_string(RejectReason r);
std::optional<RejectReason> parse_reject_reason(std::string_view s);

// ---- requests ----

struct SubmitOrder {
  AccountId account = 0;
  AssetId asset = 0;
  Side side = Side::buy;
  OrderKind kind = OrderKind::limit;  // limit or market
  Quantity quantity = 0;
  std::optional<Price> price;          // limit only
  bool operator==(const SubmitOrder&) const = default;
};

struct CancelOrder {
  AccountId account = 0;
  OrderId order_id = 0;
  bool operator==(const CancelOrder&) const = default;
};

struct GetQuote {
  AssetId asset = 0;
  bool operator==(const GetQuote&) const = default;
};

struct GetDepth {
  AssetId asset = 0;
  std::size_t levels = 5;
  bool operator==(const GetDepth&) const = default;
};

// Points with time >= since; `limit` keeps only the most recent N.
struct GetHistory {
  AssetId asset = 0;
  double since = 0.0;
  std::optional<std::size_t> limit;
  bool operator==(const GetHistory&) const = default;
};

struct GetVolume {
  AssetId asset = 0;
  bool operator==(const GetVolume&) const = default;
};

struct GetAccount {
  AccountId account = 0;
  AccountId requester = 0;
  bool operator==(const GetAccount&) const = default;
};

struct GetClock {
  bool operator==(const GetClock&) const = default;
};

using Request = std::variant<SubmitOrder, CancelOrder, GetQuote, GetDepth, GetHistory, GetVolume, GetAccount, GetClock>;

// ---- responses ----

struct Fill {
  Price price{};
  Quantity quantity = 0;
  bool operator==(const Fill&) const = default;
};

struct OrderAck {
  bool accepted = false;
  std::optional<RejectReason> reason;
  OrderId order_id = 0;
  Quantity filled = 0;
  Quantity resting = 0;
  Quantity unfilled = 0;
  std::vector<Fill> fills;
  bool operator==(const OrderAck&) const = default;
};

struct CancelAck {
  OrderId order_id = 0;
  Quantity cancelled = 0;
  bool operator==(const CancelAck&) const = default;
};

struct QuoteView {
  AssetId asset = 0;
  Quote quote;
  Quantity volume = 0;
  bool operator==(const QuoteView&) const = default;
};

struct DepthView {
  AssetId asset = 0;
  Depth depth;
  bool operator==(const DepthView&) const = default;
};

struct HistoryPoint {
  double time = 0.0;
  MidPrice mid{};
  bool operator==(const HistoryPoint&) const = default;
};

struct HistoryView {
  AssetId asset = 0;
  std::vector<HistoryPoint> points;
  bool operator==(const HistoryView&) const = default;
};

struct VolumeView {
  AssetId asset = 0;
  Quantity volume = 0;
  bool operator==(const VolumeView&) const = default;
};

enum class AccountKind : std::uint8_t { standard, dealer };
std::string_view to_string(AccountKind k);
std::optional<AccountKind> parse_account_kind(std::string_view s);

struct OpenOrder {
  OrderId id = 0;
  AssetId asset = 0;
  Side side = Side::buy;
  Price price{};
  Quantity remaining = 0;
  bool operator==(const OpenOrder&) const = default;
};

struct AccountView {
  AccountId account = 0;
  AccountKind kind = AccountKind::standard;
  Money cash{};
  Money reserved_cash{};
  std::vector<Quantity> holdings;
  std::vector<Quantity> reserved_shares;
  std::vector<OpenOrder> open_orders;
  bool operator==(const AccountView&) const = default;

  Money available_cash() const { return cash - reserved_cash; }
  Quantity available_shares(AssetId k) const { return holdings.at(k) - reserved_shares.at(k); }
};

struct ClockView {
  double now = 0.0;
  bool operator==(const ClockView&) const = default;
};

// Query failure (unknown asset/account, not owner, malformed request).
struct ErrorReply {
  std::string reason;
  bool operator==(const ErrorReply&) const = default;
};

using Response = std::variant<OrderAck, CancelAck, QuoteView, DepthView, HistoryView, VolumeView, AccountView, ClockView,
                              ErrorReply>;

// ---- codec ----

WireRequest encode_request(const Request& req);
Request decode_request(const WireRequest& wire);

WireResponse encode_response(const Response& resp);
Response decode_response(const WireResponse& wire);

// Shortest decimal that round-trips a double.
std::string format_number(double v);

}  // namespace cdasim::protocol
