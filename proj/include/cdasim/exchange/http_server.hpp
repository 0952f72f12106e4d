#pragma once

#include <memory>
#include <string>

#include "cdasim/exchange/exchange.hpp"

namespace cdasim::exchange {

// Serves the exchange wire protocol over HTTP/1.1 on a background thread.
// Every request body is handed to Exchange::handle_wire unchanged.
class HttpServer {
 public:
  // port 0 binds an ephemeral port. Each keep-alive client occupies a worker
  // while connected, so `workers` should cover the expected client count.
  HttpServer(Exchange& exchange, std::string host, int port, std::size_t workers = 16);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  void start();
  void stop();
  int port() const;
  const std::string& host() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct ListenAddress {
  std::string host = "127.0.0.1";
  int port = 0;
};

// "host:port", ":port" or "host". Throws std::invalid_argument on garbage.
ListenAddress parse_listen_address(const std::string& text);

}  // namespace cdasim::exchange
