#include <httplib.h>

#include "cdasim/protocol/transport.hpp"

namespace cdasim::protocol {

struct HttpTransport::Impl {
  httplib::Client client;
  Impl(const std::string& host, int port) : client(host, port) {}
};

HttpTransport::HttpTransport(std::string host, int port, std::chrono::milliseconds timeout)
    : impl_(std::make_unique<Impl>(host, port)) {
  impl_->client.set_connection_timeout(timeout);
  impl_->client.set_read_timeout(timeout);
  impl_->client.set_write_timeout(timeout);
  impl_->client.set_keep_alive(true);
  impl_->client.set_tcp_nodelay(true);
}

HttpTransport::~HttpTransport() = default;

WireResponse HttpTransport::roundtrip(const WireRequest& req) {
  httplib::Result res;
  if (req.method == "POST") {
    res = impl_->client.Post(req.target, req.body, "text/plain; charset=utf-8");
  } else if (req.method == "GET") {
    res = impl_->client.Get(req.target);
  } else {
    throw TransportError("unsupported method " + req.method);
  }
  if (!res) throw TransportError("http: " + httplib::to_string(res.error()));
  return WireResponse{res->status, res->body};
}

}  // namespace cdasim::protocol
