#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cdasim/exchange/ledger.hpp"
#include "cdasim/market/order_book.hpp"
#include "cdasim/protocol/messages.hpp"
#include "cdasim/protocol/wire.hpp"

namespace cdasim::exchange {

// Simulated time shared by the service and every client (served on GET /clock).
class SimClock {
 public:
  double now() const { return now_.load(std::memory_order_acquire); }
  void set(double t) { now_.store(t, std::memory_order_release); }

 private:
  std::atomic<double> now_{0.0};
};

struct Account {
  AccountId id = 0;
  AccountKind kind = AccountKind::standard;
  Money cash{};
  Money reserved_cash{};
  std::vector<Quantity> holdings;
  std::vector<Quantity> reserved_shares;
  std::set<OrderId> open_orders;
};

struct MarketInfo {
  Quantity volume = 0;                          // cumulative traded shares
  std::vector<protocol::HistoryPoint> history;  // one point per mid-price change
  std::optional<MidPrice> last_mid;
};

struct Totals {
  Money cash{};
  std::vector<Quantity> shares;
  bool operator==(const Totals&) const = default;
};

struct AuditResult {
  Money cash_delta{};
  std::vector<Quantity> share_delta;
  bool balanced() const;
};

class ReplayError : public std::runtime_error {
 public:
  ReplayError(const std::string& what, std::size_t position)
      : std::runtime_error(what + " (event index " + std::to_string(position) + ")"), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// The brokerage/exchange: account ledger, one order book per asset, market
// information, and the append-only event log. All public members are
// thread-safe; mutations are serialized, queries read a consistent state.
class Exchange {
 public:
  explicit Exchange(SimClock& clock) : clock_(&clock) {}

  Exchange(const Exchange&) = delete;
  Exchange& operator=(const Exchange&) = delete;

  // ---- setup ----
  AssetId list_asset();
  AccountId open_account(AccountKind kind, Money cash, std::vector<Quantity> holdings);
  void open_market();
  // Cancels every resting order and logs market_close.
  void close_market();
  bool is_open() const;

  // ---- mutating requests ----
  protocol::OrderAck submit_order(const protocol::SubmitOrder& req);
  // Missing or already-filled orders cancel 0 shares. Cancelling another
  // account's order is refused with not_owner.
  protocol::Response cancel_order(const protocol::CancelOrder& req);

  // ---- queries ----
  protocol::Response query_market(AssetId asset) const;
  protocol::Response query_depth(AssetId asset, std::size_t levels) const;
  protocol::Response query_history(AssetId asset, double since, std::optional<std::size_t> limit) const;
  protocol::Response query_volume(AssetId asset) const;
  protocol::Response query_account(AccountId account, AccountId requester) const;
  double now() const { return clock_->now(); }

  // Dispatch for both transports.
  protocol::Response handle(const protocol::Request& req);
  protocol::WireResponse handle_wire(const protocol::WireRequest& wire);

  // ---- auditing and persistence ----
  Totals totals() const;
  AuditResult conservation_audit(const Totals& initial) const;
  // Empty when every account satisfies its balance and reservation rules.
  std::vector<std::string> check_invariants() const;

  std::size_t asset_count() const;
  std::vector<AccountId> account_ids() const;
  std::optional<Account> account(AccountId id) const;
  MarketInfo market_info(AssetId asset) const;
  Quote quote(AssetId asset) const;

  std::vector<LedgerEvent> events() const;
  std::size_t event_count() const;
  Seq last_seq() const;
  std::vector<Trade> trades() const;

  // Canonical full-state text; two exchanges are in the same state iff their
  // snapshots are equal.
  std::string snapshot() const;
  static std::unique_ptr<Exchange> restore(std::string_view snapshot, SimClock& clock);

  // Rebuilds state by re-executing the command events of a log and checking
  // every derived event against the record.
  static std::unique_ptr<Exchange> replay(std::span<const LedgerEvent> log, SimClock& clock);

  // Test hook: applies an unbalanced cash movement to one account.
  void inject_corrupt_settlement(AccountId account, Money amount);

 private:
  struct LiveOrder {
    AccountId account = 0;
    AssetId asset = 0;
    Side side = Side::buy;
    Price limit{};
    Quantity remaining = 0;
  };

  void log(EventPayload payload);
  protocol::OrderAck reject(const protocol::SubmitOrder& req, protocol::RejectReason reason);
  void settle(const Trade& trade, const Order& taker);
  void release_resting(const LiveOrder& lo, Quantity qty);
  Quantity cancel_locked(OrderId id, CancelCause cause);
  void refresh_market(AssetId asset);
  bool valid_asset(AssetId asset) const { return asset < books_.size(); }

  SimClock* clock_;
  mutable std::shared_mutex mu_;
  bool open_ = false;
  std::vector<OrderBook> books_;
  std::vector<MarketInfo> markets_;
  std::map<AccountId, Account> accounts_;
  std::unordered_map<OrderId, LiveOrder> live_;
  std::vector<LedgerEvent> events_;
  Seq next_seq_ = 1;
  OrderId next_order_id_ = 1;
  AccountId next_account_id_ = 1;
};

}  // namespace cdasim::exchange
