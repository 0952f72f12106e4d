#include "cdasim/exchange/ledger.hpp"

#include <charconv>
#include <cstdlib>

#include <fmt/format.h>

#include "fields.hpp"

namespace cdasim::exchange {

using protocol::format_number;

namespace {

std::string join(const std::vector<Quantity>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

std::string order_fields(const protocol::SubmitOrder& r) {
  std::string s = fmt::format("account={} asset={} side={} kind={} qty={}", r.account, r.asset, to_string(r.side),
                              to_string(r.kind), r.quantity);
  if (r.price) s += fmt::format(" price={}", format_price(*r.price));
  return s;
}

}  // namespace

std::string to_line(const LedgerEvent& e) {
  const std::string head = fmt::format("{} {} ", e.seq, format_number(e.time));
  return head + std::visit(
                    [](const auto& p) -> std::string {
                      using T = std::decay_t<decltype(p)>;
                      if constexpr (std::is_same_v<T, AccountOpened>) {
                        return fmt::format("account_opened id={} kind={} cash={} holdings={}", p.account,
                                           to_string(p.kind), format_money(p.cash), join(p.holdings));
                      } else if constexpr (std::is_same_v<T, AssetListed>) {
                        return fmt::format("asset_listed asset={}", p.asset);
                      } else if constexpr (std::is_same_v<T, MarketOpen>) {
                        return "market_open";
                      } else if constexpr (std::is_same_v<T, MarketClose>) {
                        return "market_close";
                      } else if constexpr (std::is_same_v<T, OrderAccepted>) {
                        const Order& o = p.order;
                        std::string s = fmt::format("order_accepted id={} account={} asset={} side={} kind={} qty={}",
                                                    o.id, o.account, o.asset, to_string(o.side), to_string(o.kind),
                                                    o.quantity);
                        if (o.kind == OrderKind::limit) s += fmt::format(" price={}", format_price(o.limit_price));
                        return s;
                      } else if constexpr (std::is_same_v<T, OrderRejected>) {
                        return fmt::format("order_rejected {} reason={}", order_fields(p.request),
                                           protocol::to_string(p.reason));
                      } else if constexpr (std::is_same_v<T, TradeSettled>) {
                        const Trade& t = p.trade;
                        return fmt::format(
                            "trade_settled trade={} asset={} price={} qty={} maker_order={} taker_order={} "
                            "maker_account={} taker_account={} taker_side={}",
                            t.seq, t.asset, format_price(t.price), t.quantity, t.maker_order, t.taker_order,
                            t.maker_account, t.taker_account, to_string(t.taker_side));
                      } else {
                        return fmt::format("order_cancelled id={} account={} asset={} qty={} cause={}", p.order,
                                           p.account, p.asset, p.quantity,
                                           p.cause == CancelCause::request ? "request" : "close");
                      }
                    },
                    e.payload);
}

LedgerEvent parse_line(std::string_view line, std::size_t line_no) {
  auto next_token = [&](std::string_view& rest) {
    const auto sp = rest.find(' ');
    std::string_view tok = rest.substr(0, sp);
    rest = sp == std::string_view::npos ? std::string_view{} : rest.substr(sp + 1);
    return tok;
  };
  std::string_view rest = line;
  std::string_view seq_tok = next_token(rest);
  std::string_view time_tok = next_token(rest);
  std::string_view type = next_token(rest);

  LedgerEvent e;
  auto [p, ec] = std::from_chars(seq_tok.data(), seq_tok.data() + seq_tok.size(), e.seq);
  if (seq_tok.empty() || ec != std::errc{} || p != seq_tok.data() + seq_tok.size())
    throw LogFormatError("bad sequence number", line_no);
  {
    std::string tmp(time_tok);
    char* end = nullptr;
    e.time = std::strtod(tmp.c_str(), &end);
    if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw LogFormatError("bad timestamp", line_no);
  }
  const detail::Fields f(rest, line_no);

  if (type == "account_opened") {
    auto kind = protocol::parse_account_kind(f.str("kind"));
    if (!kind) throw LogFormatError("bad account kind", line_no);
    e.payload = AccountOpened{f.integer<AccountId>("id"), *kind, f.money("cash"), f.ints("holdings")};
  } else if (type == "asset_listed") {
    e.payload = AssetListed{f.integer<AssetId>("asset")};
  } else if (type == "market_open") {
    e.payload = MarketOpen{};
  } else if (type == "market_close") {
    e.payload = MarketClose{};
  } else if (type == "order_accepted") {
    Order o;
    o.id = f.integer<OrderId>("id");
    o.account = f.integer<AccountId>("account");
    o.asset = f.integer<AssetId>("asset");
    o.side = f.side();
    o.kind = f.kind();
    o.quantity = f.integer<Quantity>("qty");
    if (o.kind == OrderKind::limit) o.limit_price = f.price("price");
    o.seq = e.seq;
    e.payload = OrderAccepted{o};
  } else if (type == "order_rejected") {
    protocol::SubmitOrder r;
    r.account = f.integer<AccountId>("account");
    r.asset = f.integer<AssetId>("asset");
    r.side = f.side();
    r.kind = f.kind();
    r.quantity = f.integer<Quantity>("qty");
    if (f.has("price")) r.price = f.price("price");
    auto reason = protocol::parse_reject_reason(f.str("reason"));
    if (!reason) throw LogFormatError("bad reject reason", line_no);
    e.payload = OrderRejected{r, *reason};
  } else if (type == "trade_settled") {
    Trade t;
    t.seq = f.integer<Seq>("trade");
    t.asset = f.integer<AssetId>("asset");
    t.price = f.price("price");
    t.quantity = f.integer<Quantity>("qty");
    t.maker_order = f.integer<OrderId>("maker_order");
    t.taker_order = f.integer<OrderId>("taker_order");
    t.maker_account = f.integer<AccountId>("maker_account");
    t.taker_account = f.integer<AccountId>("taker_account");
    auto side = parse_side(f.str("taker_side"));
    if (!side) throw LogFormatError("bad taker side", line_no);
    t.taker_side = *side;
    e.payload = TradeSettled{t};
  } else if (type == "order_cancelled") {
    const std::string_view cause = f.str("cause");
    if (cause != "request" && cause != "close") throw LogFormatError("bad cancel cause", line_no);
    e.payload = OrderCancelled{f.integer<OrderId>("id"), f.integer<AccountId>("account"), f.integer<AssetId>("asset"),
                               f.integer<Quantity>("qty"),
                               cause == "request" ? CancelCause::request : CancelCause::close};
  } else {
    throw LogFormatError(fmt::format("unknown event type '{}'", type), line_no);
  }
  return e;
}

std::string write_log(const std::vector<LedgerEvent>& events) {
  std::string out;
  for (const auto& e : events) {
    out += to_line(e);
    out += '\n';
  }
  return out;
}

std::vector<LedgerEvent> read_log(std::string_view text) {
  std::vector<LedgerEvent> out;
  std::size_t pos = 0;
  std::size_t line_no = 1;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) break;  // torn final record
    std::string_view line = text.substr(pos, nl - pos);
    if (!line.empty()) out.push_back(parse_line(line, line_no));
    pos = nl + 1;
    ++line_no;
  }
  return out;
}

}  // namespace cdasim::exchange
