#pragma once

#include <chrono>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdasim/protocol/wire.hpp"

namespace cdasim::protocol {

// The request never produced a response (connect failure, timeout, reset).
class TransportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual WireResponse roundtrip(const WireRequest& req) = 0;
};

using WireHandler = std::function<WireResponse(const WireRequest&)>;

// Calls the service handler in-process with the exact bytes a socket would carry.
class LoopbackTransport final : public Transport {
 public:
  explicit LoopbackTransport(WireHandler handler) : handler_(std::move(handler)) {}
  WireResponse roundtrip(const WireRequest& req) override { return handler_(req); }

 private:
  WireHandler handler_;
};

class HttpTransport final : public Transport {
 public:
  HttpTransport(std::string host, int port, std::chrono::milliseconds timeout = std::chrono::milliseconds(2000));
  ~HttpTransport() override;
  WireResponse roundtrip(const WireRequest& req) override;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Decorator that keeps a copy of every request/response byte stream.
class RecordingTransport final : public Transport {
 public:
  explicit RecordingTransport(std::unique_ptr<Transport> inner) : inner_(std::move(inner)) {}

  WireResponse roundtrip(const WireRequest& req) override {
    WireResponse resp = inner_->roundtrip(req);
    std::lock_guard lock(mu_);
    requests_.push_back(req.bytes());
    responses_.push_back(resp.bytes());
    return resp;
  }

  std::vector<std::string> requests() const { std::lock_guard lock(mu_); return requests_; }
  std::vector<std::string> responses() const { std::lock_guard lock(mu_); return responses_; }

 private:
  std::unique_ptr<Transport> inner_;
  mutable std::mutex mu_;
  std::vector<std::string> requests_;
  std::vector<std::string> responses_;
};

}  // namespace cdasim::protocol
