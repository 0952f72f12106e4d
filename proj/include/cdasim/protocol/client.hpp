#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdasim/protocol/messages.hpp"
#include "cdasim/protocol/transport.hpp"

namespace cdasim::protocol {

// The service answered with an error (unknown asset/account, not_owner, ...).
class RequestError : public std::runtime_error {
 public:
  explicit RequestError(std::string reason) : std::runtime_error("request failed: " + reason), reason_(std::move(reason)) {}
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

// One agent's connection to the exchange. Not shareable between threads.
// Queries and cancels are retried on transport failure up to the retry
// budget; order submissions never are.
class ClientSession {
 public:
  ClientSession(std::unique_ptr<Transport> transport, AccountId account, int retry_budget = 2)
      : transport_(std::move(transport)), account_(account), retry_budget_(retry_budget) {}

  AccountId account_id() const { return account_; }

  OrderAck submit(AssetId asset, Side side, OrderKind kind, Quantity qty, std::optional<Price> price = std::nullopt);
  OrderAck submit_limit(AssetId asset, Side side, Quantity qty, Price price) {
    return submit(asset, side, OrderKind::limit, qty, price);
  }
  OrderAck submit_market(AssetId asset, Side side, Quantity qty) { return submit(asset, side, OrderKind::market, qty); }

  Quantity cancel_order(OrderId id);
  QuoteView get_quote(AssetId asset);
  Depth get_depth(AssetId asset, std::size_t levels);
  std::vector<HistoryPoint> get_history(AssetId asset, double since, std::optional<std::size_t> limit = std::nullopt);
  Quantity get_volume(AssetId asset);
  AccountView get_account();
  double get_clock();

  std::size_t requests_sent() const { return requests_; }

 private:
  Response call(const Request& req, bool idempotent);
  template <typename T>
  T expect(const Response& r);

  std::unique_ptr<Transport> transport_;
  AccountId account_;
  int retry_budget_;
  std::size_t requests_ = 0;
};

}  // namespace cdasim::protocol
