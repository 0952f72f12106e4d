#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cdasim::protocol {

// One HTTP exchange reduced to the parts both transports carry verbatim.
struct WireRequest {
  std::string method;  // "GET" or "POST"
  std::string target;  // path plus optional query string
  std::string body;

  bool operator==(const WireRequest&) const = default;

  // Canonical byte rendering used for recording and golden files.
  std::string bytes() const;
};

struct WireResponse {
  int status = 200;
  std::string body;

  bool operator==(const WireResponse&) const = default;

  std::string bytes() const;
};

class ProtocolError : public std::runtime_error {
 public:
  ProtocolError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

// Ordered `key=value` lines terminated by a lone `end` line. Keys may repeat.
class KvMessage {
 public:
  void add(std::string key, std::string value) { fields_.emplace_back(std::move(key), std::move(value)); }

  // First value for key; throws ProtocolError if missing.
  const std::string& get(std::string_view key) const;
  const std::string* find(std::string_view key) const;
  std::vector<std::string_view> all(std::string_view key) const;

  // Byte offset of the line holding `key` (or of the terminator if absent).
  std::size_t offset_of(std::string_view key) const;

  const std::vector<std::pair<std::string, std::string>>& fields() const { return fields_; }

  std::string encode() const;
  static KvMessage decode(std::string_view text);

 private:
  std::vector<std::pair<std::string, std::string>> fields_;
  std::vector<std::size_t> offsets_;
  std::size_t end_offset_ = 0;
};

}  // namespace cdasim::protocol
