#pragma once

// Space-separated `key=value` record parsing shared by the event log and the
// snapshot reader.

#include <charconv>
#include <map>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "cdasim/exchange/ledger.hpp"

namespace cdasim::exchange::detail {

class Fields {
 public:
  Fields(std::string_view rest, std::size_t line) : line_(line) {
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t sp = rest.find(' ', pos);
      if (sp == std::string_view::npos) sp = rest.size();
      std::string_view tok = rest.substr(pos, sp - pos);
      const auto eq = tok.find('=');
      if (eq == std::string_view::npos) throw LogFormatError(fmt::format("malformed field '{}'", tok), line_);
      kv_.emplace(tok.substr(0, eq), tok.substr(eq + 1));
      pos = sp + 1;
    }
  }

  std::string_view str(std::string_view key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw LogFormatError(fmt::format("missing field '{}'", key), line_);
    return it->second;
  }
  bool has(std::string_view key) const { return kv_.contains(key); }

  template <typename T>
  T integer(std::string_view key) const {
    std::string_view s = str(key);
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) throw LogFormatError(fmt::format("bad integer '{}'", s), line_);
    return v;
  }
  Price price(std::string_view key) const {
    auto p = parse_price(str(key));
    if (!p) throw LogFormatError("bad price", line_);
    return *p;
  }
  Money money(std::string_view key) const {
    auto m = parse_money(str(key));
    if (!m) throw LogFormatError("bad amount", line_);
    return *m;
  }
  Side side() const {
    auto s = parse_side(str("side"));
    if (!s) throw LogFormatError("bad side", line_);
    return *s;
  }
  OrderKind kind() const {
    auto k = parse_order_kind(str("kind"));
    if (!k) throw LogFormatError("bad order kind", line_);
    return *k;
  }
  std::vector<Quantity> ints(std::string_view key) const {
    std::vector<Quantity> out;
    std::string_view s = str(key);
    std::size_t pos = 0;
    while (!s.empty() && pos <= s.size()) {
      std::size_t sc = s.find(';', pos);
      if (sc == std::string_view::npos) sc = s.size();
      std::string_view tok = s.substr(pos, sc - pos);
      Quantity v{};
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc{} || p != tok.data() + tok.size()) throw LogFormatError("bad integer list", line_);
      out.push_back(v);
      pos = sc + 1;
    }
    return out;
  }

 private:
  std::map<std::string_view, std::string_view, std::less<>> kv_;
  std::size_t line_;
};


}  // namespace cdasim::exchange::detail
