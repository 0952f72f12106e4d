#include "cdasim/protocol/client.hpp"

namespace cdasim::protocol {

Response ClientSession::call(const Request& req, bool idempotent) {
  const WireRequest wire = encode_request(req);
  int attempts_left = idempotent ? retry_budget_ : 0;
  while (true) {
    try {
      ++requests_;
      return decode_response(transport_->roundtrip(wire));
    } catch (const TransportError&) {
      if (attempts_left-- <= 0) throw;
    }
  }
}

template <typename T>
T ClientSession::expect(const Response& r) {
  if (const auto* err = std::get_if<ErrorReply>(&r)) throw RequestError(err->reason);
  if (const auto* v = std::get_if<T>(&r)) return *v;
  throw ProtocolError("unexpected response type", 0);
}

OrderAck ClientSession::submit(AssetId asset, Side side, OrderKind kind, Quantity qty, std::optional<Price> price) {
  return expect<OrderAck>(call(SubmitOrder{account_, asset, side, kind, qty, price}, false));
}

Quantity ClientSession::cancel_order(OrderId id) {
  return expect<CancelAck>(call(CancelOrder{account_, id}, true)).cancelled;
}

QuoteView ClientSession::get_quote(AssetId asset) { return expect<QuoteView>(call(GetQuote{asset}, true)); }

Depth ClientSession::get_depth(AssetId asset, std::size_t levels) {
  return expect<DepthView>(call(GetDepth{asset, levels}, true)).depth;
}

std::vector<HistoryPoint> ClientSession::get_history(AssetId asset, double since, std::optional<std::size_t> limit) {
  return expect<HistoryView>(call(GetHistory{asset, since, limit}, true)).points;
}

Quantity ClientSession::get_volume(AssetId asset) { return expect<VolumeView>(call(GetVolume{asset}, true)).volume; }

AccountView ClientSession::get_account() { return expect<AccountView>(call(GetAccount{account_, account_}, true)); }

double ClientSession::get_clock() { return expect<ClockView>(call(GetClock{}, true)).now; }

}  // namespace cdasim::protocol
