#include "cdasim/exchange/exchange.hpp"

#include <algorithm>
#include <mutex>

#include <fmt/format.h>

namespace cdasim::exchange {

using protocol::ErrorReply;
using protocol::OrderAck;
using protocol::RejectReason;
using protocol::Response;
using protocol::SubmitOrder;

bool AuditResult::balanced() const {
  return cash_delta.cents == 0 && std::all_of(share_delta.begin(), share_delta.end(), [](Quantity q) { return q == 0; });
}

void Exchange::log(EventPayload payload) {
  events_.push_back(LedgerEvent{next_seq_++, clock_->now(), std::move(payload)});
}

AssetId Exchange::list_asset() {
  std::unique_lock lock(mu_);
  const auto id = static_cast<AssetId>(books_.size());
  books_.emplace_back(id);
  markets_.emplace_back();
  for (auto& [aid, acct] : accounts_) {
    acct.holdings.push_back(0);
    acct.reserved_shares.push_back(0);
  }
  log(AssetListed{id});
  return id;
}

AccountId Exchange::open_account(AccountKind kind, Money cash, std::vector<Quantity> holdings) {
  std::unique_lock lock(mu_);
  holdings.resize(books_.size(), 0);
  Account acct;
  acct.id = next_account_id_++;
  acct.kind = kind;
  acct.cash = cash;
  acct.holdings = holdings;
  acct.reserved_shares.assign(books_.size(), 0);
  accounts_.emplace(acct.id, acct);
  log(AccountOpened{acct.id, kind, cash, std::move(holdings)});
  return acct.id;
}

void Exchange::open_market() {
  std::unique_lock lock(mu_);
  if (open_) return;
  open_ = true;
  log(MarketOpen{});
}

void Exchange::close_market() {
  std::unique_lock lock(mu_);
  if (!open_) return;
  open_ = false;
  log(MarketClose{});
  std::vector<OrderId> resting;
  for (const auto& book : books_)
    for (const Order& o : book.resting_orders()) resting.push_back(o.id);
  for (OrderId id : resting) cancel_locked(id, CancelCause::close);
}

bool Exchange::is_open() const {
  std::shared_lock lock(mu_);
  return open_;
}

OrderAck Exchange::reject(const SubmitOrder& req, RejectReason reason) {
  log(OrderRejected{req, reason});
  OrderAck ack;
  ack.accepted = false;
  ack.reason = reason;
  ack.unfilled = req.quantity;
  return ack;
}

OrderAck Exchange::submit_order(const SubmitOrder& req) {
  std::unique_lock lock(mu_);
  if (!open_) return reject(req, RejectReason::market_closed);
  if (!valid_asset(req.asset)) return reject(req, RejectReason::unknown_asset);
  auto acct_it = accounts_.find(req.account);
  if (acct_it == accounts_.end()) return reject(req, RejectReason::unknown_account);
  if (req.quantity < 1 || req.kind == OrderKind::cancel) return reject(req, RejectReason::invalid_order);
  if (req.kind == OrderKind::limit && (!req.price || !req.price->valid()))
    return reject(req, RejectReason::invalid_order);
  if (req.kind == OrderKind::market && req.price) return reject(req, RejectReason::invalid_order);

  Account& acct = acct_it->second;
  OrderBook& book = books_[req.asset];
  const bool standard = acct.kind == AccountKind::standard;

  Money cash_reserve{};
  Quantity share_reserve = 0;
  std::optional<Money> notional_cap;
  if (standard) {
    if (req.side == Side::buy) {
      if (req.kind == OrderKind::limit) {
        cash_reserve = req.price->notional(req.quantity);
      } else {
        const Quote q = book.best_quote();
        cash_reserve = q.ask ? q.ask->notional(req.quantity) : Money{0};
        notional_cap = cash_reserve;
      }
      if (acct.cash - acct.reserved_cash < cash_reserve) return reject(req, RejectReason::insufficient_funds);
    } else {
      share_reserve = req.quantity;
      if (acct.holdings[req.asset] - acct.reserved_shares[req.asset] < share_reserve)
        return reject(req, RejectReason::insufficient_shares);
    }
  }

  Order order;
  order.id = next_order_id_++;
  order.account = req.account;
  order.asset = req.asset;
  order.side = req.side;
  order.kind = req.kind;
  order.quantity = req.quantity;
  if (req.price) order.limit_price = *req.price;
  order.seq = next_seq_;
  log(OrderAccepted{order});

  acct.reserved_cash += cash_reserve;
  acct.reserved_shares[req.asset] += share_reserve;

  Execution exec = order.kind == OrderKind::limit ? book.place_limit(order) : book.place_market(order, notional_cap);

  OrderAck ack;
  ack.accepted = true;
  ack.order_id = order.id;
  Money consumed{};
  for (const Trade& t : exec.trades) {
    settle(t, order);
    consumed += t.price.notional(t.quantity);
    ack.fills.push_back(protocol::Fill{t.price, t.quantity});
  }
  ack.filled = exec.filled;

  if (order.kind == OrderKind::market) {
    ack.unfilled = exec.unfilled;
    if (standard) {
      Account& a = accounts_.at(order.account);
      if (order.side == Side::buy) {
        a.reserved_cash -= cash_reserve - consumed;
      } else {
        a.reserved_shares[order.asset] -= exec.unfilled;
      }
    }
  } else if (exec.resting) {
    ack.resting = exec.resting->quantity;
    live_[order.id] = LiveOrder{order.account, order.asset, order.side, order.limit_price, exec.resting->quantity};
    accounts_.at(order.account).open_orders.insert(order.id);
  }

  refresh_market(order.asset);
  return ack;
}

void Exchange::release_resting(const LiveOrder& lo, Quantity qty) {
  Account& a = accounts_.at(lo.account);
  if (a.kind != AccountKind::standard) return;
  if (lo.side == Side::buy) {
    a.reserved_cash -= lo.limit.notional(qty);
  } else {
    a.reserved_shares[lo.asset] -= qty;
  }
}

void Exchange::settle(const Trade& trade, const Order& taker) {
  const Money notional = trade.price.notional(trade.quantity);
  const AssetId k = trade.asset;

  auto maker_it = live_.find(trade.maker_order);
  if (maker_it != live_.end()) {
    LiveOrder& lo = maker_it->second;
    release_resting(lo, trade.quantity);
    lo.remaining -= trade.quantity;
    if (lo.remaining == 0) {
      accounts_.at(lo.account).open_orders.erase(trade.maker_order);
      live_.erase(maker_it);
    }
  }

  Account& taker_acct = accounts_.at(taker.account);
  if (taker_acct.kind == AccountKind::standard) {
    if (taker.side == Side::buy) {
      taker_acct.reserved_cash -= taker.kind == OrderKind::limit ? taker.limit_price.notional(trade.quantity) : notional;
    } else {
      taker_acct.reserved_shares[k] -= trade.quantity;
    }
  }

  Account& buyer = accounts_.at(trade.buyer());
  buyer.cash -= notional;
  buyer.holdings[k] += trade.quantity;
  Account& seller = accounts_.at(trade.seller());
  seller.cash += notional;
  seller.holdings[k] -= trade.quantity;

  markets_[k].volume += trade.quantity;
  log(TradeSettled{trade});
}

Quantity Exchange::cancel_locked(OrderId id, CancelCause cause) {
  auto it = live_.find(id);
  if (it == live_.end()) return 0;
  const LiveOrder lo = it->second;
  const Quantity qty = books_[lo.asset].cancel(id);
  release_resting(lo, qty);
  accounts_.at(lo.account).open_orders.erase(id);
  live_.erase(it);
  log(OrderCancelled{id, lo.account, lo.asset, qty, cause});
  refresh_market(lo.asset);
  return qty;
}

Response Exchange::cancel_order(const protocol::CancelOrder& req) {
  std::unique_lock lock(mu_);
  if (!accounts_.contains(req.account)) return ErrorReply{"unknown_account"};
  auto it = live_.find(req.order_id);
  if (it != live_.end() && it->second.account != req.account) return ErrorReply{"not_owner"};
  return protocol::CancelAck{req.order_id, cancel_locked(req.order_id, CancelCause::request)};
}

void Exchange::refresh_market(AssetId asset) {
  const Quote q = books_[asset].best_quote();
  MarketInfo& m = markets_[asset];
  if (q.mid && (!m.last_mid || *m.last_mid != *q.mid)) {
    m.history.push_back(protocol::HistoryPoint{clock_->now(), *q.mid});
    m.last_mid = q.mid;
  }
}

Response Exchange::query_market(AssetId asset) const {
  std::shared_lock lock(mu_);
  if (!valid_asset(asset)) return ErrorReply{"unknown_asset"};
  return protocol::QuoteView{asset, books_[asset].best_quote(), markets_[asset].volume};
}

Response Exchange::query_depth(AssetId asset, std::size_t levels) const {
  std::shared_lock lock(mu_);
  if (!valid_asset(asset)) return ErrorReply{"unknown_asset"};
  if (levels < 1) return ErrorReply{"bad_request"};
  return protocol::DepthView{asset, books_[asset].depth_snapshot(levels)};
}

Response Exchange::query_history(AssetId asset, double since, std::optional<std::size_t> limit) const {
  std::shared_lock lock(mu_);
  if (!valid_asset(asset)) return ErrorReply{"unknown_asset"};
  const auto& h = markets_[asset].history;
  auto first = std::lower_bound(h.begin(), h.end(), since,
                                [](const protocol::HistoryPoint& p, double t) { return p.time < t; });
  if (limit && static_cast<std::size_t>(h.end() - first) > *limit) first = h.end() - static_cast<std::ptrdiff_t>(*limit);
  return protocol::HistoryView{asset, std::vector<protocol::HistoryPoint>(first, h.end())};
}

Response Exchange::query_volume(AssetId asset) const {
  std::shared_lock lock(mu_);
  if (!valid_asset(asset)) return ErrorReply{"unknown_asset"};
  return protocol::VolumeView{asset, markets_[asset].volume};
}

Response Exchange::query_account(AccountId account, AccountId requester) const {
  std::shared_lock lock(mu_);
  auto it = accounts_.find(account);
  if (it == accounts_.end()) return ErrorReply{"unknown_account"};
  if (requester != account) return ErrorReply{"not_owner"};
  const Account& a = it->second;
  protocol::AccountView v;
  v.account = a.id;
  v.kind = a.kind;
  v.cash = a.cash;
  v.reserved_cash = a.reserved_cash;
  v.holdings = a.holdings;
  v.reserved_shares = a.reserved_shares;
  for (OrderId id : a.open_orders) {
    const LiveOrder& lo = live_.at(id);
    v.open_orders.push_back(protocol::OpenOrder{id, lo.asset, lo.side, lo.limit, lo.remaining});
  }
  return v;
}

Response Exchange::handle(const protocol::Request& req) {
  return std::visit(
      [this](const auto& r) -> Response {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SubmitOrder>) return submit_order(r);
        else if constexpr (std::is_same_v<T, protocol::CancelOrder>) return cancel_order(r);
        else if constexpr (std::is_same_v<T, protocol::GetQuote>) return query_market(r.asset);
        else if constexpr (std::is_same_v<T, protocol::GetDepth>) return query_depth(r.asset, r.levels);
        else if constexpr (std::is_same_v<T, protocol::GetHistory>) return query_history(r.asset, r.since, r.limit);
        else if constexpr (std::is_same_v<T, protocol::GetVolume>) return query_volume(r.asset);
        else if constexpr (std::is_same_v<T, protocol::GetAccount>) return query_account(r.account, r.requester);
        else return protocol::ClockView{now()};
      },
      req);
}

protocol::WireResponse Exchange::handle_wire(const protocol::WireRequest& wire) {
  protocol::Request req;
  try {
    req = protocol::decode_request(wire);
  } catch (const protocol::ProtocolError&) {
    return protocol::encode_response(ErrorReply{"bad_request"});
  }
  return protocol::encode_response(handle(req));
}

Totals Exchange::totals() const {
  std::shared_lock lock(mu_);
  Totals t;
  t.shares.assign(books_.size(), 0);
  for (const auto& [id, a] : accounts_) {
    t.cash += a.cash;
    for (std::size_t k = 0; k < a.holdings.size(); ++k) t.shares[k] += a.holdings[k];
  }
  return t;
}

AuditResult Exchange::conservation_audit(const Totals& initial) const {
  const Totals now = totals();
  AuditResult r;
  r.cash_delta = now.cash - initial.cash;
  r.share_delta.assign(now.shares.size(), 0);
  for (std::size_t k = 0; k < now.shares.size(); ++k)
    r.share_delta[k] = now.shares[k] - (k < initial.shares.size() ? initial.shares[k] : 0);
  return r;
}

std::vector<std::string> Exchange::check_invariants() const {
  std::shared_lock lock(mu_);
  std::vector<std::string> errs;
  std::map<AccountId, Money> want_cash;
  std::map<AccountId, std::vector<Quantity>> want_shares;
  for (const auto& [id, lo] : live_) {
    if (lo.side == Side::buy) {
      want_cash[lo.account] += lo.limit.notional(lo.remaining);
    } else {
      auto& v = want_shares[lo.account];
      v.resize(books_.size(), 0);
      v[lo.asset] += lo.remaining;
    }
  }
  for (const auto& [id, a] : accounts_) {
    if (a.kind == AccountKind::standard) {
      if (a.cash.cents < 0) errs.push_back(fmt::format("account {} negative cash", id));
      if (a.reserved_cash > a.cash) errs.push_back(fmt::format("account {} over-reserved cash", id));
      if (a.reserved_cash != want_cash[id]) errs.push_back(fmt::format("account {} cash reservation drift", id));
      auto shares = want_shares[id];
      shares.resize(books_.size(), 0);
      for (std::size_t k = 0; k < a.holdings.size(); ++k) {
        if (a.holdings[k] < 0) errs.push_back(fmt::format("account {} negative holdings", id));
        if (a.reserved_shares[k] > a.holdings[k]) errs.push_back(fmt::format("account {} over-reserved shares", id));
        if (a.reserved_shares[k] != shares[k]) errs.push_back(fmt::format("account {} share reservation drift", id));
      }
    } else if (a.reserved_cash.cents != 0) {
      errs.push_back(fmt::format("dealer {} holds a reservation", id));
    }
  }
  std::size_t resting = 0;
  for (const auto& b : books_) {
    resting += b.resting_count();
    const Quote q = b.best_quote();
    if (q.bid && q.ask && !(*q.bid < *q.ask)) errs.push_back(fmt::format("book {} crossed", b.asset()));
  }
  if (resting != live_.size()) errs.push_back("live order index out of sync with books");
  return errs;
}

std::size_t Exchange::asset_count() const {
  std::shared_lock lock(mu_);
  return books_.size();
}

std::vector<AccountId> Exchange::account_ids() const {
  std::shared_lock lock(mu_);
  std::vector<AccountId> ids;
  for (const auto& [id, a] : accounts_) ids.push_back(id);
  return ids;
}

std::optional<Account> Exchange::account(AccountId id) const {
  std::shared_lock lock(mu_);
  auto it = accounts_.find(id);
  if (it == accounts_.end()) return std::nullopt;
  return it->second;
}

MarketInfo Exchange::market_info(AssetId asset) const {
  std::shared_lock lock(mu_);
  return markets_.at(asset);
}

Quote Exchange::quote(AssetId asset) const {
  std::shared_lock lock(mu_);
  return books_.at(asset).best_quote();
}

std::vector<LedgerEvent> Exchange::events() const {
  std::shared_lock lock(mu_);
  return events_;
}

std::size_t Exchange::event_count() const {
  std::shared_lock lock(mu_);
  return events_.size();
}

Seq Exchange::last_seq() const {
  std::shared_lock lock(mu_);
  return next_seq_ - 1;
}

std::vector<Trade> Exchange::trades() const {
  std::shared_lock lock(mu_);
  std::vector<Trade> out;
  for (const auto& e : events_)
    if (const auto* t = std::get_if<TradeSettled>(&e.payload)) out.push_back(t->trade);
  return out;
}

void Exchange::inject_corrupt_settlement(AccountId account, Money amount) {
  std::unique_lock lock(mu_);
  accounts_.at(account).cash += amount;
}

}  // namespace cdasim::exchange
