#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>

#include "cdasim/protocol/client.hpp"

namespace cdasim::agents {

enum class Role : std::uint8_t { liquidity_taker, liquidity_provider, market_maker, intelligent };

std::string_view to_string(Role r);

// One trading participant. Each tick the runner calls decide() on every agent
// (possibly in parallel; only reads through the agent's own session are
// allowed) and then act() on every agent one at a time in a seeded order.
class Agent {
 public:
  Agent(Role role, std::size_t index, std::unique_ptr<protocol::ClientSession> session)
      : role_(role), index_(index), session_(std::move(session)) {}
  virtual ~Agent() = default;

  Agent(const Agent&) = delete;
  Agent& operator=(const Agent&) = delete;

  virtual void decide(double now) = 0;
  virtual void act(double now) = 0;

  Role role() const { return role_; }
  std::size_t index() const { return index_; }
  AccountId account() const { return session_->account_id(); }
  std::size_t activations() const { return activations_; }

 protected:
  protocol::ClientSession& session() { return *session_; }
  void count_activation() { ++activations_; }

 private:
  Role role_;
  std::size_t index_;
  std::unique_ptr<protocol::ClientSession> session_;
  std::size_t activations_ = 0;
};

}  // namespace cdasim::agents
