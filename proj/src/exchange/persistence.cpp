// Snapshot writer/reader and event-log replay. Formats are described in
// docs/formats.md.

#include <mutex>

#include <fmt/format.h>

#include "cdasim/exchange/exchange.hpp"
#include "fields.hpp"

namespace cdasim::exchange {

namespace {

std::string join(const std::vector<Quantity>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

}  // namespace

std::string Exchange::snapshot() const {
  std::shared_lock lock(mu_);
  std::string out = fmt::format("exchange next_seq={} next_order={} next_account={} open={} assets={}\n", next_seq_,
                                next_order_id_, next_account_id_, open_ ? 1 : 0, books_.size());
  for (const auto& [id, a] : accounts_) {
    out += fmt::format("account id={} kind={} cash={} reserved_cash={} holdings={} reserved_shares={}\n", id,
                       to_string(a.kind), format_money(a.cash), format_money(a.reserved_cash), join(a.holdings),
                       join(a.reserved_shares));
  }
  for (std::size_t k = 0; k < books_.size(); ++k) {
    const MarketInfo& m = markets_[k];
    out += fmt::format("asset id={} volume={} next_trade={} last_mid={}\n", k, m.volume, books_[k].next_trade_seq(),
                       m.last_mid ? format_mid(*m.last_mid) : std::string("-"));
    for (const Order& o : books_[k].resting_orders()) {
      out += fmt::format("order id={} account={} asset={} side={} price={} qty={} seq={}\n", o.id, o.account, o.asset,
                         to_string(o.side), format_price(o.limit_price), o.quantity, o.seq);
    }
    for (const auto& p : m.history)
      out += fmt::format("point asset={} t={} mid={}\n", k, protocol::format_number(p.time), format_mid(p.mid));
  }
  return out;
}

std::unique_ptr<Exchange> Exchange::restore(std::string_view text, SimClock& clock) {
  auto ex = std::make_unique<Exchange>(clock);
  std::size_t pos = 0;
  std::size_t line_no = 1;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    if (line.empty()) { ++line_no; continue; }
    const auto sp = line.find(' ');
    const std::string_view tag = line.substr(0, sp);
    const detail::Fields f(sp == std::string_view::npos ? std::string_view{} : line.substr(sp + 1), line_no);

    if (tag == "exchange") {
      ex->next_seq_ = f.integer<Seq>("next_seq");
      ex->next_order_id_ = f.integer<OrderId>("next_order");
      ex->next_account_id_ = f.integer<AccountId>("next_account");
      ex->open_ = f.integer<int>("open") != 0;
      const auto n = f.integer<std::size_t>("assets");
      for (std::size_t k = 0; k < n; ++k) {
        ex->books_.emplace_back(static_cast<AssetId>(k));
        ex->markets_.emplace_back();
      }
    } else if (tag == "account") {
      Account a;
      a.id = f.integer<AccountId>("id");
      auto kind = protocol::parse_account_kind(f.str("kind"));
      if (!kind) throw LogFormatError("bad account kind", line_no);
      a.kind = *kind;
      a.cash = f.money("cash");
      a.reserved_cash = f.money("reserved_cash");
      a.holdings = f.ints("holdings");
      a.reserved_shares = f.ints("reserved_shares");
      ex->accounts_.emplace(a.id, std::move(a));
    } else if (tag == "asset") {
      const auto k = f.integer<std::size_t>("id");
      if (k >= ex->books_.size()) throw LogFormatError("asset out of range", line_no);
      ex->markets_[k].volume = f.integer<Quantity>("volume");
      ex->books_[k].set_next_trade_seq(f.integer<Seq>("next_trade"));
      if (f.str("last_mid") != "-") {
        ex->markets_[k].last_mid = parse_mid(f.str("last_mid"));
        if (!ex->markets_[k].last_mid) throw LogFormatError("bad mid", line_no);
      }
    } else if (tag == "order") {
      Order o;
      o.id = f.integer<OrderId>("id");
      o.account = f.integer<AccountId>("account");
      o.asset = f.integer<AssetId>("asset");
      o.side = f.side();
      o.kind = OrderKind::limit;
      o.limit_price = f.price("price");
      o.quantity = f.integer<Quantity>("qty");
      o.seq = f.integer<Seq>("seq");
      if (o.asset >= ex->books_.size()) throw LogFormatError("asset out of range", line_no);
      auto acct = ex->accounts_.find(o.account);
      if (acct == ex->accounts_.end()) throw LogFormatError("order for unknown account", line_no);
      ex->books_[o.asset].restore_resting(o);
      ex->live_[o.id] = LiveOrder{o.account, o.asset, o.side, o.limit_price, o.quantity};
      acct->second.open_orders.insert(o.id);
    } else if (tag == "point") {
      const auto k = f.integer<std::size_t>("asset");
      if (k >= ex->markets_.size()) throw LogFormatError("asset out of range", line_no);
      auto mid = parse_mid(f.str("mid"));
      if (!mid) throw LogFormatError("bad mid", line_no);
      std::string t(f.str("t"));
      ex->markets_[k].history.push_back(protocol::HistoryPoint{std::stod(t), *mid});
    } else {
      throw LogFormatError(fmt::format("unknown snapshot record '{}'", tag), line_no);
    }
    ++line_no;
  }
  return ex;
}

std::unique_ptr<Exchange> Exchange::replay(std::span<const LedgerEvent> log, SimClock& clock) {
  auto ex = std::make_unique<Exchange>(clock);
  std::size_t i = 0;
  while (i < log.size()) {
    const LedgerEvent& e = log[i];
    if (e.seq != ex->next_seq_)
      throw ReplayError(fmt::format("out-of-order sequence {} (expected {})", e.seq, ex->next_seq_), i);
    clock.set(e.time);
    const std::size_t before = ex->events_.size();

    std::visit(
        [&](const auto& p) {
          using T = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<T, AccountOpened>) {
            ex->open_account(p.kind, p.cash, p.holdings);
          } else if constexpr (std::is_same_v<T, AssetListed>) {
            ex->list_asset();
          } else if constexpr (std::is_same_v<T, MarketOpen>) {
            ex->open_market();
          } else if constexpr (std::is_same_v<T, MarketClose>) {
            ex->close_market();
          } else if constexpr (std::is_same_v<T, OrderAccepted>) {
            protocol::SubmitOrder req{p.order.account, p.order.asset, p.order.side, p.order.kind, p.order.quantity,
                                      std::nullopt};
            if (p.order.kind == OrderKind::limit) req.price = p.order.limit_price;
            ex->submit_order(req);
          } else if constexpr (std::is_same_v<T, OrderRejected>) {
            ex->submit_order(p.request);
          } else if constexpr (std::is_same_v<T, OrderCancelled>) {
            if (p.cause != CancelCause::request) throw ReplayError("close cancellation outside market_close", i);
            ex->cancel_order(protocol::CancelOrder{p.account, p.order});
          } else {
            throw ReplayError("settlement without a preceding order", i);
          }
        },
        e.payload);

    const std::size_t produced = ex->events_.size() - before;
    if (produced == 0) throw ReplayError("event had no effect on replay", i);
    for (std::size_t j = 0; j < produced && i + j < log.size(); ++j) {
      if (to_line(ex->events_[before + j]) != to_line(log[i + j]))
        throw ReplayError(fmt::format("replay diverged: expected '{}'", to_line(ex->events_[before + j])), i + j);
    }
    i += produced;
  }
  return ex;
}

}  // namespace cdasim::exchange
