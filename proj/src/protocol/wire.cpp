#include "cdasim/protocol/wire.hpp"

#include <fmt/format.h>

namespace cdasim::protocol {

std::string WireRequest::bytes() const {
  return fmt::format("{} {} HTTP/1.1\r\nContent-Length: {}\r\n\r\n{}", method, target, body.size(), body);
}

std::string WireResponse::bytes() const {
  return fmt::format("HTTP/1.1 {}\r\nContent-Length: {}\r\n\r\n{}", status, body.size(), body);
}

const std::string* KvMessage::find(std::string_view key) const {
  for (const auto& [k, v] : fields_)
    if (k == key) return &v;
  return nullptr;
}

const std::string& KvMessage::get(std::string_view key) const {
  if (const std::string* v = find(key)) return *v;
  throw ProtocolError(fmt::format("missing field '{}'", key), end_offset_);
}

std::vector<std::string_view> KvMessage::all(std::string_view key) const {
  std::vector<std::string_view> out;
  for (const auto& [k, v] : fields_)
    if (k == key) out.emplace_back(v);
  return out;
}

std::size_t KvMessage::offset_of(std::string_view key) const {
  for (std::size_t i = 0; i < fields_.size(); ++i)
    if (fields_[i].first == key) return i < offsets_.size() ? offsets_[i] : 0;
  return end_offset_;
}

std::string KvMessage::encode() const {
  std::string out;
  for (const auto& [k, v] : fields_) {
    out += k;
    out += '=';
    out += v;
    out += '\n';
  }
  out += "end\n";
  return out;
}

KvMessage KvMessage::decode(std::string_view text) {
  KvMessage msg;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) throw ProtocolError("truncated line", pos);
    std::string_view line = text.substr(pos, nl - pos);
    if (line == "end") {
      if (nl + 1 != text.size()) throw ProtocolError("trailing data after terminator", nl + 1);
      msg.end_offset_ = pos;
      return msg;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ProtocolError("malformed field", pos);
    msg.fields_.emplace_back(std::string(line.substr(0, eq)), std::string(line.substr(eq + 1)));
    msg.offsets_.push_back(pos);
    pos = nl + 1;
  }
  throw ProtocolError("missing terminator", text.size());
}

}  // namespace cdasim::protocol
