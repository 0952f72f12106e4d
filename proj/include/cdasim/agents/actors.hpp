#pragma once

#include <string>
#include <vector>

#include "cdasim/agents/agent.hpp"
#include "cdasim/agents/flow.hpp"
#include "cdasim/agents/rng.hpp"

namespace cdasim::agents {

struct LpParams {
  std::size_t window = 100;        // most recent mid-price points used for sigma
  double sigma_fallback = 0.005;   // when fewer than two points or zero volatility
};

struct MmParams {
  double eps_min = -0.5;
  double eps_max = 1.0;
  Quantity order_size = 100;
};

// Stateless between activations apart from its random stream, which
// serialize()/restore() carry.
class LiquidityTaker final : public Agent {
 public:
  LiquidityTaker(std::size_t index, std::unique_ptr<protocol::ClientSession> session, Rng rng, double t_freq,
                 std::size_t assets);

  void decide(double now) override;
  void act(double now) override;

  const std::vector<MarketOrderIntent>& planned() const { return planned_; }
  std::string serialize() const;
  void restore(const std::string& state);

 private:
  Rng rng_;
  ActivationGate gate_;
  std::size_t assets_;
  std::vector<MarketOrderIntent> planned_;
};

class LiquidityProvider final : public Agent {
 public:
  LiquidityProvider(std::size_t index, std::unique_ptr<protocol::ClientSession> session, Rng rng, double t_freq,
                    std::size_t assets, LpParams params);

  void decide(double now) override;
  void act(double now) override;

  const std::vector<LimitOrderIntent>& planned() const { return planned_; }
  std::string serialize() const;
  void restore(const std::string& state);

 private:
  Rng rng_;
  ActivationGate gate_;
  std::size_t assets_;
  LpParams params_;
  std::vector<LimitOrderIntent> planned_;
};

// Quotes both sides, hedges part of its inventory, and withdraws whatever is
// still resting on the following tick.
class MarketMaker final : public Agent {
 public:
  MarketMaker(std::size_t index, std::unique_ptr<protocol::ClientSession> session, Rng rng, double t_freq,
              std::size_t assets, MmParams params);

  void decide(double now) override;
  void act(double now) override;

  const std::vector<OrderId>& live_quotes() const { return live_; }

 private:
  Rng rng_;
  ActivationGate gate_;
  std::size_t assets_;
  MmParams params_;
  bool active_ = false;
  std::vector<OrderId> live_;
};

// The quoted mid, or while one side of the book is empty the last mid the
// exchange reported (from `history` when given, else one history query).
std::optional<double> reference_mid(protocol::ClientSession& session, AssetId asset, const Quote& quote,
                                    const std::vector<protocol::HistoryPoint>* history = nullptr);

// Sigma of log mid returns over the last `window` history points, or the
// fallback when that is zero or undefined.
double lp_sigma(const std::vector<protocol::HistoryPoint>& history, double fallback);

}  // namespace cdasim::agents
