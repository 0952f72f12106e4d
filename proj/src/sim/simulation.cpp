#include "cdasim/sim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <thread>

#include <fmt/format.h>

#include "cdasim/agents/actors.hpp"
#include "cdasim/agents/rng.hpp"
#include "cdasim/exchange/http_server.hpp"
#include "cdasim/protocol/transport.hpp"

namespace cdasim::sim {

using agents::Role;

namespace {

std::uint64_t role_tag(Role r) { return static_cast<std::uint64_t>(r) + 1; }

double mark(const std::optional<MidPrice>& mid, Price fallback) { return mid ? mid->value() : fallback.value(); }

double account_value(Money cash, const std::vector<Quantity>& holdings, const std::vector<double>& marks) {
  double v = cash.value();
  for (std::size_t k = 0; k < holdings.size() && k < marks.size(); ++k) v += static_cast<double>(holdings[k]) * marks[k];
  return v;
}

}  // namespace

AgentCrash::AgentCrash(const AgentSlot& slot, Seq last_seq, const std::string& what)
    : std::runtime_error(fmt::format("agent {} ({}, account {}) crashed after event seq {}: {}", slot.index,
                                     agents::to_string(slot.role), slot.account, last_seq, what)),
      agent_(slot.index),
      last_seq_(last_seq) {}

MarketSetup initialize_market(const ScenarioConfig& cfg, exchange::Exchange& ex) {
  cfg.validate();
  agents::Rng rng = agents::make_stream(cfg.seed, 0, kInitStream);
  MarketSetup setup;
  const std::size_t k_assets = cfg.assets;
  for (std::size_t k = 0; k < k_assets; ++k) ex.list_asset();

  std::uniform_real_distribution<double> mid_draw(cfg.mid_min, cfg.mid_max);
  for (std::size_t k = 0; k < k_assets; ++k) setup.initial_mids.emplace_back(std::llround(mid_draw(rng) * 100.0));

  // standard accounts: shares first, then raw cash draws
  const std::size_t n_std = cfg.n_lt + cfg.n_lp;
  std::uniform_int_distribution<Quantity> share_draw(cfg.shares_min, cfg.shares_max);
  std::uniform_real_distribution<double> cash_draw(cfg.cash_min, cfg.cash_max);
  std::vector<std::vector<Quantity>> holdings(n_std, std::vector<Quantity>(k_assets));
  std::vector<double> cash(n_std);
  double share_value = 0.0, raw_cash = 0.0;
  for (std::size_t i = 0; i < n_std; ++i) {
    for (std::size_t k = 0; k < k_assets; ++k) {
      holdings[i][k] = share_draw(rng);
      share_value += static_cast<double>(holdings[i][k]) * setup.initial_mids[k].value();
    }
    cash[i] = cash_draw(rng);
    raw_cash += cash[i];
  }
  const double scale = cfg.balance_cash && raw_cash > 0.0 ? share_value / raw_cash : 1.0;

  std::size_t index = 0;
  auto add = [&](Role role, protocol::AccountKind kind, Money c, std::vector<Quantity> h) {
    const AccountId id = ex.open_account(kind, c, h);
    setup.agents.push_back(AgentSlot{role, index++, id, c, std::move(h)});
  };
  for (std::size_t i = 0; i < n_std; ++i) {
    const Role role = i < cfg.n_lt ? Role::liquidity_taker : Role::liquidity_provider;
    add(role, protocol::AccountKind::standard, Money{std::llround(cash[i] * scale * 100.0)}, holdings[i]);
  }
  for (std::size_t i = 0; i < cfg.n_mm; ++i)
    add(Role::market_maker, protocol::AccountKind::dealer, Money{}, std::vector<Quantity>(k_assets, 0));
  for (std::size_t i = 0; i < cfg.n_ia; ++i)
    add(Role::intelligent, protocol::AccountKind::dealer, Money{}, std::vector<Quantity>(k_assets, 0));

  // the ladder owner holds exactly what its orders reserve
  const auto levels = static_cast<std::int64_t>(cfg.ladder_levels);
  Money ladder_cash{};
  for (std::size_t k = 0; k < k_assets; ++k)
    for (std::int64_t l = 1; l <= levels; ++l)
      ladder_cash += Price{setup.initial_mids[k].ticks - l}.notional(cfg.ladder_qty);
  setup.liquidity_account = ex.open_account(protocol::AccountKind::standard, ladder_cash,
                                            std::vector<Quantity>(k_assets, levels * cfg.ladder_qty));

  ex.open_market();
  if (cfg.ladder_qty > 0) {
    for (std::size_t k = 0; k < k_assets; ++k) {
      const auto asset = static_cast<AssetId>(k);
      for (std::int64_t l = 1; l <= levels; ++l) {
        ex.submit_order({setup.liquidity_account, asset, Side::buy, OrderKind::limit, cfg.ladder_qty,
                         Price{setup.initial_mids[k].ticks - l}});
        ex.submit_order({setup.liquidity_account, asset, Side::sell, OrderKind::limit, cfg.ladder_qty,
                         Price{setup.initial_mids[k].ticks + l}});
      }
    }
  }
  setup.initial = ex.totals();
  return setup;
}

RunResult run(const ScenarioConfig& cfg, const RunOptions& options) {
  const auto wall_start = std::chrono::steady_clock::now();
  exchange::SimClock clock;
  exchange::Exchange ex(clock);
  RunResult result;
  result.config = cfg;
  result.setup = initialize_market(cfg, ex);
  const std::size_t k_assets = cfg.assets;

  std::unique_ptr<exchange::HttpServer> server;
  std::function<std::unique_ptr<protocol::Transport>()> connect;
  if (options.transport == TransportKind::http) {
    std::string addr = options.listen;
    if (addr.empty()) {
      const char* env = std::getenv("SIM_LISTEN_ADDR");
      addr = env ? env : "127.0.0.1:0";
    }
    const exchange::ListenAddress la = exchange::parse_listen_address(addr);
    server = std::make_unique<exchange::HttpServer>(ex, la.host, la.port, cfg.agent_count() + 8);
    server->start();
    const std::string host = la.host == "0.0.0.0" ? "127.0.0.1" : la.host;
    const int port = server->port();
    connect = [host, port] { return std::make_unique<protocol::HttpTransport>(host, port); };
  } else {
    connect = [&ex] {
      return std::make_unique<protocol::LoopbackTransport>(
          [&ex](const protocol::WireRequest& r) { return ex.handle_wire(r); });
    };
  }

  std::vector<std::unique_ptr<agents::Agent>> roster;
  std::size_t ia_seen = 0;
  for (const AgentSlot& slot : result.setup.agents) {
    auto session = std::make_unique<protocol::ClientSession>(connect(), slot.account);
    agents::Rng rng = agents::make_stream(cfg.seed, slot.index, role_tag(slot.role));
    switch (slot.role) {
      case Role::liquidity_taker:
        roster.push_back(std::make_unique<agents::LiquidityTaker>(slot.index, std::move(session), std::move(rng),
                                                                  cfg.freq_lt, k_assets));
        break;
      case Role::liquidity_provider:
        roster.push_back(std::make_unique<agents::LiquidityProvider>(slot.index, std::move(session), std::move(rng),
                                                                     cfg.freq_lp, k_assets, cfg.lp));
        break;
      case Role::market_maker:
        roster.push_back(std::make_unique<agents::MarketMaker>(slot.index, std::move(session), std::move(rng),
                                                               cfg.freq_mm, k_assets, cfg.mm));
        break;
      case Role::intelligent: {
        ia::IaConfig ic = cfg.ia;
        ic.t_freq = cfg.freq_ia;
        roster.push_back(std::make_unique<ia::IntelligentAgent>(
            slot.index, std::move(session), static_cast<AssetId>(ia_seen++ % k_assets), ic));
        break;
      }
    }
  }

  agents::Rng scheduler = agents::make_stream(cfg.seed, 0, kSchedulerStream);
  std::vector<std::size_t> order(roster.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<std::exception_ptr> failures(roster.size());
  auto crash = [&](std::size_t i, std::exception_ptr e) {
    std::string what = "unknown exception";
    try {
      std::rethrow_exception(e);
    } catch (const std::exception& ex_) {
      what = ex_.what();
    } catch (...) {
    }
    throw AgentCrash(result.setup.agents[i], ex.last_seq(), what);
  };

  auto decide = [&](std::size_t i, double now) {
    try {
      if (options.fault && options.fault->agent == i && options.fault->at == now)
        throw std::runtime_error("injected fault");
      roster[i]->decide(now);
    } catch (...) {
      failures[i] = std::current_exception();
    }
  };

  const auto ticks = static_cast<std::int64_t>(std::ceil(cfg.t_close));
  const auto n = static_cast<std::int64_t>(roster.size());
  result.quotes.reserve(static_cast<std::size_t>(ticks) * k_assets);
  for (std::int64_t tick = 0; tick < ticks; ++tick) {
    const double now = static_cast<double>(tick);
    clock.set(now);

    // phase A: observe and plan; agents only read through their own sessions
    if (options.parallel) {
#pragma omp parallel for schedule(dynamic, 8)
      for (std::int64_t i = 0; i < n; ++i) decide(static_cast<std::size_t>(i), now);
    } else {
      for (std::int64_t i = 0; i < n; ++i) decide(static_cast<std::size_t>(i), now);
    }
    for (std::size_t i = 0; i < failures.size(); ++i)
      if (failures[i]) crash(i, failures[i]);

    // phase B: submit, one agent at a time in a seeded order
    std::shuffle(order.begin(), order.end(), scheduler);
    for (std::size_t i : order) {
      try {
        roster[i]->act(now);
      } catch (...) {
        crash(i, std::current_exception());
      }
    }

    for (std::size_t k = 0; k < k_assets; ++k) {
      const auto asset = static_cast<AssetId>(k);
      result.quotes.push_back(QuoteSample{now, asset, ex.quote(asset)});
    }
    if (options.realtime)
      std::this_thread::sleep_until(wall_start + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                                                     std::chrono::duration<double>((now + 1.0) / cfg.accel)));
  }

  clock.set(cfg.t_close);
  ex.close_market();
  for (const auto& a : roster)
    if (const auto* ia_agent = dynamic_cast<const ia::IntelligentAgent*>(a.get()))
      result.ia_diagnostics.emplace_back(ia_agent->index(), ia_agent->diagnostics());
  // closing the client connections first keeps stop() from waiting out keep-alives
  roster.clear();
  if (server) server->stop();

  result.events = ex.events();
  for (const auto& e : result.events) {
    if (std::holds_alternative<exchange::TradeSettled>(e.payload)) ++result.trades;
    if (std::holds_alternative<exchange::OrderAccepted>(e.payload) ||
        std::holds_alternative<exchange::OrderRejected>(e.payload))
      ++result.orders;
  }
  result.audit = ex.conservation_audit(result.setup.initial);
  result.invariant_violations = ex.check_invariants();
  result.snapshot = ex.snapshot();

  std::vector<double> initial_marks, final_marks;
  for (std::size_t k = 0; k < k_assets; ++k) {
    const exchange::MarketInfo info = ex.market_info(static_cast<AssetId>(k));
    result.history.push_back(info.history);
    initial_marks.push_back(result.setup.initial_mids[k].value());
    final_marks.push_back(mark(info.last_mid, result.setup.initial_mids[k]));
    std::vector<double> mids;
    mids.reserve(info.history.size());
    for (const auto& p : info.history) mids.push_back(p.mid.value());
    result.facts.push_back(stats::validate_run(mids));
  }

  for (Role role : {Role::liquidity_taker, Role::liquidity_provider, Role::market_maker, Role::intelligent}) {
    RolePnl rp;
    rp.role = role;
    for (const AgentSlot& slot : result.setup.agents) {
      if (slot.role != role) continue;
      const auto acct = ex.account(slot.account);
      const double pnl = account_value(acct->cash, acct->holdings, final_marks) -
                         account_value(slot.cash, slot.holdings, initial_marks);
      ++rp.agents;
      rp.total += pnl;
      rp.profitable += pnl > 0;
    }
    if (rp.agents == 0) continue;
    rp.mean = rp.total / static_cast<double>(rp.agents);
    result.pnl.push_back(rp);
  }

  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
  return result;
}

MarketQuality market_quality(const std::vector<QuoteSample>& quotes, AssetId asset) {
  MarketQuality q;
  double spread_sum = 0.0;
  std::size_t spread_n = 0;
  std::vector<double> returns;
  std::optional<double> last_mid;
  for (const QuoteSample& s : quotes) {
    if (s.asset != asset) continue;
    ++q.samples;
    if (s.quote.bid && s.quote.ask) {
      spread_sum += s.quote.ask->value() - s.quote.bid->value();
      ++spread_n;
    }
    if (s.quote.mid) {
      const double m = s.quote.mid->value();
      if (last_mid) returns.push_back(std::log(m / *last_mid));
      last_mid = m;
    }
  }
  if (spread_n) q.mean_spread = spread_sum / static_cast<double>(spread_n);
  if (returns.size() >= 2) {
    const double mean = std::accumulate(returns.begin(), returns.end(), 0.0) / static_cast<double>(returns.size());
    double ss = 0.0;
    for (double r : returns) ss += (r - mean) * (r - mean);
    q.return_variance = ss / static_cast<double>(returns.size());
  }
  return q;
}

}  // namespace cdasim::sim
