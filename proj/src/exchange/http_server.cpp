#include "cdasim/exchange/http_server.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include <httplib.h>

namespace cdasim::exchange {

struct HttpServer::Impl {
  Exchange& exchange;
  std::string host;
  int port;
  httplib::Server server;
  std::thread worker;
  Impl(Exchange& ex, std::string h, int p) : exchange(ex), host(std::move(h)), port(p) {}
};

HttpServer::HttpServer(Exchange& exchange, std::string host, int port, std::size_t workers)
    : impl_(std::make_unique<Impl>(exchange, std::move(host), port)) {
  workers = std::max<std::size_t>(workers, 1);
  impl_->server.new_task_queue = [workers] { return new httplib::ThreadPool(workers); };
  impl_->server.set_tcp_nodelay(true);
  impl_->server.set_keep_alive_max_count(1000000);
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    const protocol::WireResponse wire = impl_->exchange.handle_wire(protocol::WireRequest{req.method, req.target, req.body});
    res.status = wire.status;
    res.set_content(wire.body, "text/plain; charset=utf-8");
  };
  impl_->server.Post(R"(/(order|cancel))", forward);
  impl_->server.Get(R"(/.*)", forward);
}

HttpServer::~HttpServer() { stop(); }

void HttpServer::start() {
  if (impl_->worker.joinable()) return;
  if (impl_->port == 0) {
    impl_->port = impl_->server.bind_to_any_port(impl_->host);
  } else if (!impl_->server.bind_to_port(impl_->host, impl_->port)) {
    impl_->port = -1;
  }
  if (impl_->port < 0) throw std::runtime_error("exchange: cannot bind " + impl_->host);
  impl_->worker = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
}

void HttpServer::stop() {
  if (!impl_ || !impl_->worker.joinable()) return;
  impl_->server.stop();
  impl_->worker.join();
}

int HttpServer::port() const { return impl_->port; }
const std::string& HttpServer::host() const { return impl_->host; }

ListenAddress parse_listen_address(const std::string& text) {
  ListenAddress addr;
  const auto colon = text.rfind(':');
  if (colon == std::string::npos) {
    if (!text.empty()) addr.host = text;
    return addr;
  }
  if (colon > 0) addr.host = text.substr(0, colon);
  const std::string port = text.substr(colon + 1);
  try {
    std::size_t used = 0;
    addr.port = std::stoi(port, &used);
    if (used != port.size() || addr.port < 0 || addr.port > 65535) throw std::invalid_argument(port);
  } catch (const std::exception&) {
    throw std::invalid_argument("bad listen address '" + text + "'");
  }
  return addr;
}

}  // namespace cdasim::exchange
