#include <charconv>
#include <cstdlib>

#include <fmt/format.h>

#include "cdasim/protocol/messages.hpp"

namespace cdasim::protocol {

std::string_view to_string(RejectReason r) {
  switch (r) {
    case RejectReason::insufficient_funds: return "insufficient_funds";
    case RejectReason::insufficient_shares: return "insufficient_shares";
    case RejectReason::market_closed: return "market_closed";
    case RejectReason::unknown_asset: return "unknown_asset";
    case RejectReason::unknown_account: return "unknown_account";
    case RejectReason::not_owner: return "not_owner";
    case RejectReason::invalid_order: return "invalid_order";
  }
  return "unknown";
}

std::optional<RejectReason> parse_reject_reason(std::string_view s) {
  for (auto r : {RejectReason::insufficient_funds, RejectReason::insufficient_shares, RejectReason::market_closed,
                 RejectReason::unknown_asset, RejectReason::unknown_account, RejectReason::not_owner,
                 RejectReason::invalid_order})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

std::string_view to_string(AccountKind k) { return k == AccountKind::standard ? "standard" : "dealer"; }

std::optional<AccountKind> parse_account_kind(std::string_view s) {
  if (s == "standard") return AccountKind::standard;
  if (s == "dealer") return AccountKind::dealer;
  return std::nullopt;
}

std::string format_number(double v) { return fmt::format("{}", v); }

namespace {

template <typename T>
T parse_int(std::string_view s, std::size_t offset) {
  T v{};
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || p != s.data() + s.size())
    throw ProtocolError(fmt::format("bad integer '{}'", s), offset);
  return v;
}

double parse_double(std::string_view s, std::size_t offset) {
  std::string tmp(s);
  char* end = nullptr;
  const double v = std::strtod(tmp.c_str(), &end);
  if (tmp.empty() || end != tmp.c_str() + tmp.size()) throw ProtocolError(fmt::format("bad number '{}'", s), offset);
  return v;
}

template <typename T>
T field_int(const KvMessage& m, std::string_view key) {
  return parse_int<T>(m.get(key), m.offset_of(key));
}

Price field_price(const KvMessage& m, std::string_view key, std::string_view raw) {
  auto p = parse_price(raw);
  if (!p) throw ProtocolError(fmt::format("bad price '{}'", raw), m.offset_of(key));
  return *p;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const std::size_t next = s.find(sep, pos);
    out.push_back(s.substr(pos, next - pos));
    if (next == std::string_view::npos) break;
    pos = next + 1;
  }
  return out;
}

std::string join_ints(const std::vector<Quantity>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(v[i]);
  }
  return out;
}

std::vector<Quantity> parse_ints(std::string_view s, std::size_t offset) {
  std::vector<Quantity> out;
  if (s.empty()) return out;
  for (auto part : split(s, ';')) out.push_back(parse_int<Quantity>(part, offset));
  return out;
}

struct Target {
  std::vector<std::string_view> path;
  std::vector<std::pair<std::string_view, std::string_view>> query;

  std::optional<std::string_view> param(std::string_view key) const {
    for (auto& [k, v] : query)
      if (k == key) return v;
    return std::nullopt;
  }
};

Target parse_target(std::string_view target) {
  Target t;
  const auto q = target.find('?');
  std::string_view path = target.substr(0, q);
  if (path.empty() || path.front() != '/') throw ProtocolError("target must start with '/'", 0);
  path.remove_prefix(1);
  t.path = split(path, '/');
  if (q != std::string_view::npos) {
    for (auto kv : split(target.substr(q + 1), '&')) {
      const auto eq = kv.find('=');
      if (eq == std::string_view::npos) throw ProtocolError("malformed query parameter", q + 1);
      t.query.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
    }
  }
  return t;
}

WireRequest get(std::string target) { return WireRequest{"GET", std::move(target), {}}; }

}  // namespace

WireRequest encode_request(const Request& req) {
  return std::visit(
      [](const auto& r) -> WireRequest {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, SubmitOrder>) {
          KvMessage m;
          m.add("account", std::to_string(r.account));
          m.add("asset", std::to_string(r.asset));
          m.add("side", std::string(to_string(r.side)));
          m.add("kind", std::string(to_string(r.kind)));
          m.add("qty", std::to_string(r.quantity));
          if (r.price) m.add("price", format_price(*r.price));
          return WireRequest{"POST", "/order", m.encode()};
        } else if constexpr (std::is_same_v<T, CancelOrder>) {
          KvMessage m;
          m.add("account", std::to_string(r.account));
          m.add("order", std::to_string(r.order_id));
          return WireRequest{"POST", "/cancel", m.encode()};
        } else if constexpr (std::is_same_v<T, GetQuote>) {
          return get(fmt::format("/quote/{}", r.asset));
        } else if constexpr (std::is_same_v<T, GetDepth>) {
          return get(fmt::format("/depth/{}?levels={}", r.asset, r.levels));
        } else if constexpr (std::is_same_v<T, GetHistory>) {
          std::string target = fmt::format("/history/{}?since={}", r.asset, format_number(r.since));
          if (r.limit) target += fmt::format("&limit={}", *r.limit);
          return get(std::move(target));
        } else if constexpr (std::is_same_v<T, GetVolume>) {
          return get(fmt::format("/volume/{}", r.asset));
        } else if constexpr (std::is_same_v<T, GetAccount>) {
          return get(fmt::format("/account/{}?as={}", r.account, r.requester));
        } else {
          return get("/clock");
        }
      },
      req);
}

Request decode_request(const WireRequest& wire) {
  const Target t = parse_target(wire.target);
  const auto& p = t.path;
  auto need_param = [&](std::string_view key) {
    auto v = t.param(key);
    if (!v) throw ProtocolError(fmt::format("missing query parameter '{}'", key), 0);
    return *v;
  };

  if (wire.method == "POST" && p.size() == 1 && p[0] == "order") {
    const KvMessage m = KvMessage::decode(wire.body);
    SubmitOrder o;
    o.account = field_int<AccountId>(m, "account");
    o.asset = field_int<AssetId>(m, "asset");
    auto side = parse_side(m.get("side"));
    if (!side) throw ProtocolError("bad side", m.offset_of("side"));
    o.side = *side;
    auto kind = parse_order_kind(m.get("kind"));
    if (!kind || *kind == OrderKind::cancel) throw ProtocolError("bad kind", m.offset_of("kind"));
    o.kind = *kind;
    o.quantity = field_int<Quantity>(m, "qty");
    if (const std::string* px = m.find("price")) o.price = field_price(m, "price", *px);
    return o;
  }
  if (wire.method == "POST" && p.size() == 1 && p[0] == "cancel") {
    const KvMessage m = KvMessage::decode(wire.body);
    return CancelOrder{field_int<AccountId>(m, "account"), field_int<OrderId>(m, "order")};
  }
  if (wire.method != "GET") throw ProtocolError(fmt::format("unsupported method '{}'", wire.method), 0);

  if (p.size() == 1 && p[0] == "clock") return GetClock{};
  if (p.size() == 2) {
    const auto asset = [&] { return parse_int<AssetId>(p[1], 0); };
    if (p[0] == "quote") return GetQuote{asset()};
    if (p[0] == "volume") return GetVolume{asset()};
    if (p[0] == "depth") return GetDepth{asset(), parse_int<std::size_t>(need_param("levels"), 0)};
    if (p[0] == "history") {
      GetHistory h{asset(), parse_double(need_param("since"), 0), std::nullopt};
      if (auto lim = t.param("limit")) h.limit = parse_int<std::size_t>(*lim, 0);
      return h;
    }
    if (p[0] == "account")
      return GetAccount{parse_int<AccountId>(p[1], 0), parse_int<AccountId>(need_param("as"), 0)};
  }
  throw ProtocolError(fmt::format("unknown endpoint '{}'", wire.target), 0);
}

namespace {

int status_for(const ErrorReply& e) {
  if (e.reason == "unknown_asset" || e.reason == "unknown_account") return 404;
  if (e.reason == "not_owner") return 403;
  return 400;
}

}  // namespace

WireResponse encode_response(const Response& resp) {
  KvMessage m;
  int status = 200;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, OrderAck>) {
          m.add("type", "ack");
          m.add("status", r.accepted ? "accepted" : "rejected");
          if (r.reason) m.add("reason", std::string(to_string(*r.reason)));
          m.add("order", std::to_string(r.order_id));
          m.add("filled", std::to_string(r.filled));
          m.add("resting", std::to_string(r.resting));
          m.add("unfilled", std::to_string(r.unfilled));
          for (const Fill& f : r.fills) m.add("fill", fmt::format("{},{}", format_price(f.price), f.quantity));
        } else if constexpr (std::is_same_v<T, CancelAck>) {
          m.add("type", "cancel");
          m.add("order", std::to_string(r.order_id));
          m.add("cancelled", std::to_string(r.cancelled));
        } else if constexpr (std::is_same_v<T, QuoteView>) {
          m.add("type", "quote");
          m.add("asset", std::to_string(r.asset));
          if (r.quote.bid) m.add("bid", format_price(*r.quote.bid));
          if (r.quote.ask) m.add("ask", format_price(*r.quote.ask));
          if (r.quote.mid) m.add("mid", format_mid(*r.quote.mid));
          m.add("volume", std::to_string(r.volume));
        } else if constexpr (std::is_same_v<T, DepthView>) {
          m.add("type", "depth");
          m.add("asset", std::to_string(r.asset));
          for (const auto& l : r.depth.bids)
            m.add("bid", fmt::format("{},{},{}", format_price(l.price), l.quantity, l.order_count));
          for (const auto& l : r.depth.asks)
            m.add("ask", fmt::format("{},{},{}", format_price(l.price), l.quantity, l.order_count));
        } else if constexpr (std::is_same_v<T, HistoryView>) {
          m.add("type", "history");
          m.add("asset", std::to_string(r.asset));
          for (const auto& pt : r.points) m.add("point", fmt::format("{},{}", format_number(pt.time), format_mid(pt.mid)));
        } else if constexpr (std::is_same_v<T, VolumeView>) {
          m.add("type", "volume");
          m.add("asset", std::to_string(r.asset));
          m.add("volume", std::to_string(r.volume));
        } else if constexpr (std::is_same_v<T, AccountView>) {
          m.add("type", "account");
          m.add("account", std::to_string(r.account));
          m.add("kind", std::string(to_string(r.kind)));
          m.add("cash", format_money(r.cash));
          m.add("reserved_cash", format_money(r.reserved_cash));
          m.add("holdings", join_ints(r.holdings));
          m.add("reserved_shares", join_ints(r.reserved_shares));
          for (const auto& o : r.open_orders)
            m.add("order", fmt::format("{},{},{},{},{}", o.id, o.asset, to_string(o.side), format_price(o.price),
                                       o.remaining));
        } else if constexpr (std::is_same_v<T, ClockView>) {
          m.add("type", "clock");
          m.add("now", format_number(r.now));
        } else {
          m.add("type", "error");
          m.add("reason", r.reason);
          status = status_for(r);
        }
      },
      resp);
  return WireResponse{status, m.encode()};
}

Response decode_response(const WireResponse& wire) {
  const KvMessage m = KvMessage::decode(wire.body);
  const std::string& type = m.get("type");

  if (type == "ack") {
    OrderAck a;
    const std::string& st = m.get("status");
    if (st != "accepted" && st != "rejected") throw ProtocolError("bad ack status", m.offset_of("status"));
    a.accepted = st == "accepted";
    if (const std::string* r = m.find("reason")) {
      a.reason = parse_reject_reason(*r);
      if (!a.reason) throw ProtocolError("bad reject reason", m.offset_of("reason"));
    }
    a.order_id = field_int<OrderId>(m, "order");
    a.filled = field_int<Quantity>(m, "filled");
    a.resting = field_int<Quantity>(m, "resting");
    a.unfilled = field_int<Quantity>(m, "unfilled");
    for (auto f : m.all("fill")) {
      auto parts = split(f, ',');
      if (parts.size() != 2) throw ProtocolError("bad fill", m.offset_of("fill"));
      a.fills.push_back(Fill{field_price(m, "fill", parts[0]), parse_int<Quantity>(parts[1], m.offset_of("fill"))});
    }
    return a;
  }
  if (type == "cancel") return CancelAck{field_int<OrderId>(m, "order"), field_int<Quantity>(m, "cancelled")};
  if (type == "quote") {
    QuoteView q;
    q.asset = field_int<AssetId>(m, "asset");
    if (const std::string* b = m.find("bid")) q.quote.bid = field_price(m, "bid", *b);
    if (const std::string* a = m.find("ask")) q.quote.ask = field_price(m, "ask", *a);
    if (const std::string* mid = m.find("mid")) {
      q.quote.mid = parse_mid(*mid);
      if (!q.quote.mid) throw ProtocolError("bad mid", m.offset_of("mid"));
    }
    q.volume = field_int<Quantity>(m, "volume");
    return q;
  }
  if (type == "depth") {
    DepthView d;
    d.asset = field_int<AssetId>(m, "asset");
    auto levels = [&](std::string_view key, std::vector<DepthLevel>& out) {
      for (auto l : m.all(key)) {
        auto parts = split(l, ',');
        if (parts.size() != 3) throw ProtocolError("bad depth level", m.offset_of(key));
        out.push_back(DepthLevel{field_price(m, key, parts[0]), parse_int<Quantity>(parts[1], m.offset_of(key)),
                                 parse_int<std::size_t>(parts[2], m.offset_of(key))});
      }
    };
    levels("bid", d.depth.bids);
    levels("ask", d.depth.asks);
    return d;
  }
  if (type == "history") {
    HistoryView h;
    h.asset = field_int<AssetId>(m, "asset");
    for (auto pt : m.all("point")) {
      auto parts = split(pt, ',');
      auto mid = parts.size() == 2 ? parse_mid(parts[1]) : std::nullopt;
      if (!mid) throw ProtocolError("bad history point", m.offset_of("point"));
      h.points.push_back(HistoryPoint{parse_double(parts[0], m.offset_of("point")), *mid});
    }
    return h;
  }
  if (type == "volume") return VolumeView{field_int<AssetId>(m, "asset"), field_int<Quantity>(m, "volume")};
  if (type == "account") {
    AccountView a;
    a.account = field_int<AccountId>(m, "account");
    auto kind = parse_account_kind(m.get("kind"));
    if (!kind) throw ProtocolError("bad account kind", m.offset_of("kind"));
    a.kind = *kind;
    auto money = [&](std::string_view key) {
      auto v = parse_money(m.get(key));
      if (!v) throw ProtocolError("bad amount", m.offset_of(key));
      return *v;
    };
    a.cash = money("cash");
    a.reserved_cash = money("reserved_cash");
    a.holdings = parse_ints(m.get("holdings"), m.offset_of("holdings"));
    a.reserved_shares = parse_ints(m.get("reserved_shares"), m.offset_of("reserved_shares"));
    for (auto o : m.all("order")) {
      auto parts = split(o, ',');
      const std::size_t off = m.offset_of("order");
      if (parts.size() != 5) throw ProtocolError("bad open order", off);
      auto side = parse_side(parts[2]);
      if (!side) throw ProtocolError("bad side", off);
      a.open_orders.push_back(OpenOrder{parse_int<OrderId>(parts[0], off), parse_int<AssetId>(parts[1], off), *side,
                                        field_price(m, "order", parts[3]), parse_int<Quantity>(parts[4], off)});
    }
    return a;
  }
  if (type == "clock") return ClockView{parse_double(m.get("now"), m.offset_of("now"))};
  if (type == "error") return ErrorReply{m.get("reason")};
  throw ProtocolError(fmt::format("unknown response type '{}'", type), m.offset_of("type"));
}

}  // namespace cdasim::protocol
