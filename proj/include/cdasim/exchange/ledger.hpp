#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cdasim/market/types.hpp"
#include "cdasim/protocol/messages.hpp"

namespace cdasim::exchange {

using protocol::AccountKind;
using protocol::RejectReason;

struct AccountOpened {
  AccountId account = 0;
  AccountKind kind = AccountKind::standard;
  Money cash{};
  std::vector<Quantity> holdings;
  bool operator==(const AccountOpened&) const = default;
};

struct AssetListed {
  AssetId asset = 0;
  bool operator==(const AssetListed&) const = default;
};

struct MarketOpen {
  bool operator==(const MarketOpen&) const = default;
};

struct MarketClose {
  bool operator==(const MarketClose&) const = default;
};

struct OrderAccepted {
  Order order;  // id and seq as assigned by the exchange
  bool operator==(const OrderAccepted&) const = default;
};

struct OrderRejected {
  protocol::SubmitOrder request;
  RejectReason reason = RejectReason::invalid_order;
  bool operator==(const OrderRejected&) const = default;
};

struct TradeSettled {
  Trade trade;
  bool operator==(const TradeSettled&) const = default;
};

enum class CancelCause : std::uint8_t { request, close };

struct OrderCancelled {
  OrderId order = 0;
  AccountId account = 0;
  AssetId asset = 0;
  Quantity quantity = 0;
  CancelCause cause = CancelCause::request;
  bool operator==(const OrderCancelled&) const = default;
};

using EventPayload = std::variant<AccountOpened, AssetListed, MarketOpen, MarketClose, OrderAccepted, OrderRejected,
                                  TradeSettled, OrderCancelled>;

struct LedgerEvent {
  Seq seq = 0;
  double time = 0.0;
  EventPayload payload;
  bool operator==(const LedgerEvent&) const = default;
};

// `<seq> <time> <type> key=value ...`, one event per line (no newline).
std::string to_line(const LedgerEvent& e);

class LogFormatError : public std::runtime_error {
 public:
  LogFormatError(const std::string& what, std::size_t line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

LedgerEvent parse_line(std::string_view line, std::size_t line_no = 0);

// Whole-file helpers. A final line without a trailing newline is treated as a
// torn write and dropped.
std::string write_log(const std::vector<LedgerEvent>& events);
std::vector<LedgerEvent> read_log(std::string_view text);

}  // namespace cdasim::exchange
