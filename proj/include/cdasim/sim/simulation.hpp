#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cdasim/agents/agent.hpp"
#include "cdasim/exchange/exchange.hpp"
#include "cdasim/ia/agent.hpp"
#include "cdasim/sim/scenario.hpp"
#include "cdasim/stats/facts.hpp"

namespace cdasim::sim {

// Seed-stream tags; agent streams use the role value.
inline constexpr std::uint64_t kInitStream = 100;
inline constexpr std::uint64_t kSchedulerStream = 101;

struct AgentSlot {
  agents::Role role = agents::Role::liquidity_taker;
  std::size_t index = 0;  // global, LTs first, then LPs, MMs, IAs
  AccountId account = 0;
  Money cash{};
  std::vector<Quantity> holdings;
};

struct MarketSetup {
  std::vector<Price> initial_mids;
  AccountId liquidity_account = 0;  // owns the initial ladder; not an agent
  std::vector<AgentSlot> agents;
  exchange::Totals initial;
};

// Lists the assets, opens every account, opens the market and seeds the
// books. Draws come from the scenario's init stream only.
MarketSetup initialize_market(const ScenarioConfig& cfg, exchange::Exchange& ex);

enum class TransportKind { loopback, http };

struct RunOptions {
  TransportKind transport = TransportKind::loopback;
  bool realtime = false;  // pace ticks at cfg.accel simulated seconds per wall second
  bool parallel = true;   // OpenMP decide phase; false runs the serial reference loop
  std::string listen;     // http bind address, default from SIM_LISTEN_ADDR or 127.0.0.1:0

  // test hook: agent `agent` throws from its decide step at second `at`
  struct Fault {
    std::size_t agent = 0;
    double at = 0.0;
  };
  std::optional<Fault> fault;
};

struct QuoteSample {
  double time = 0.0;
  AssetId asset = 0;
  Quote quote;
};

struct RolePnl {
  agents::Role role = agents::Role::liquidity_taker;
  std::size_t agents = 0;
  double total = 0.0;  // marked to the closing mid
  double mean = 0.0;
  std::size_t profitable = 0;
};

struct MarketQuality {
  std::size_t samples = 0;
  double mean_spread = 0.0;      // over seconds with both sides quoted
  double return_variance = 0.0;  // of one-second log mid returns
};

struct RunResult {
  ScenarioConfig config;
  MarketSetup setup;
  std::vector<exchange::LedgerEvent> events;
  std::vector<std::vector<protocol::HistoryPoint>> history;  // per asset, one point per mid change
  std::vector<QuoteSample> quotes;                           // every asset at the end of every second
  exchange::AuditResult audit;
  std::vector<std::string> invariant_violations;
  std::vector<RolePnl> pnl;
  std::vector<stats::RunReport> facts;  // per asset
  std::vector<std::pair<std::size_t, std::vector<ia::Diagnostics>>> ia_diagnostics;
  std::string snapshot;
  std::size_t trades = 0;
  std::size_t orders = 0;
  double wall_seconds = 0.0;

  bool conserved() const { return audit.balanced(); }
};

// An agent threw; the run stops at once.
class AgentCrash : public std::runtime_error {
 public:
  AgentCrash(const AgentSlot& slot, Seq last_seq, const std::string& what);
  std::size_t agent() const { return agent_; }
  Seq last_seq() const { return last_seq_; }

 private:
  std::size_t agent_;
  Seq last_seq_;
};

RunResult run(const ScenarioConfig& cfg, const RunOptions& options = {});

MarketQuality market_quality(const std::vector<QuoteSample>& quotes, AssetId asset);

// Writes the run's CSV series, event log, snapshot, fact report, plots and
// summary into `dir`. Output depends only on the result, so re-emitting is
// byte-identical.
void emit_report(const RunResult& result, const std::filesystem::path& dir);

struct PriceSeries {
  AssetId asset = 0;
  std::vector<double> times;
  std::vector<double> mids;
};
// `t,asset,p_mid` CSV, grouped by asset in first-seen order.
std::vector<PriceSeries> read_price_csv(const std::string& text);

// Validates every asset in a price CSV; writes report.csv, the fact panels
// and summary.txt. Returns the number of assets that passed.
std::size_t validate_series(const std::filesystem::path& csv, const std::filesystem::path& dir,
                            const stats::FactThresholds& th = {});

}  // namespace cdasim::sim
