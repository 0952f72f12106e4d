#pragma once

#include <deque>
#include <optional>
#include <vector>

#include "cdasim/agents/agent.hpp"
#include "cdasim/ia/policy.hpp"

namespace cdasim::ia {

struct Diagnostics {
  double time = 0.0;
  double eps_star = 0.0;
  double eps_skew = 0.0;
  double hedge_fraction = 0.0;
  Quantity inventory = 0;
  Money cash{};
  double expected_flow = 0.0;
  double expected_pnl = 0.0;
};

// `t,eps_star,eps_skew,x_hedge,z,cash,E_nu,E_s`
std::string diagnostics_csv(const std::vector<Diagnostics>& rows);

// The intelligent market maker on a single asset. Each cycle quotes both
// sides and hedges, then polls every t_freq until the traded volume moves (or
// the watchdog expires), withdraws what is left, and learns from the fills.
class IntelligentAgent final : public agents::Agent {
 public:
  IntelligentAgent(std::size_t index, std::unique_ptr<protocol::ClientSession> session, AssetId asset,
                   IaConfig config);

  void decide(double) override {}
  void act(double now) override;

  const IaModels& models() const { return models_; }
  double eps_star() const { return eps_star_; }
  const std::vector<Diagnostics>& diagnostics() const { return diag_; }
  std::size_t completed_cycles() const { return cycles_; }

 private:
  struct LiveQuote {
    OrderId order = 0;
    double eps = 0.0;
    Quantity resting = 0;
    Quantity filled_on_entry = 0;
  };

  void complete_cycle(Quantity volume_now);
  void start_cycle(double now);

  AssetId asset_;
  IaConfig config_;
  IaModels models_;
  double eps_star_ = 0.0;
  double market_volume_ = 0.0;

  bool waiting_ = false;
  double next_poll_ = 0.0;
  double quoted_at_ = 0.0;
  Quantity volume_baseline_ = 0;
  double quote_mid_ = 0.0;
  double quote_sref_ = 0.0;
  std::optional<LiveQuote> bid_;
  std::optional<LiveQuote> ask_;

  std::deque<double> mids_;  // own observations, capped
  std::vector<Diagnostics> diag_;
  std::size_t cycles_ = 0;
};

}  // namespace cdasim::ia
