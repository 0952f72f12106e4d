// sim: run scenarios, validate price series, replay event logs.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "cdasim/exchange/exchange.hpp"
#include "cdasim/sim/simulation.hpp"

using namespace cdasim;

namespace {

int do_run(const std::string& scenario, std::optional<std::uint64_t> seed, const std::string& out, bool realtime,
           std::optional<double> accel, const std::string& transport, bool serial) {
  sim::ScenarioConfig cfg = sim::load_scenario(scenario);
  if (seed) cfg.seed = *seed;
  if (accel) cfg.accel = *accel;
  cfg.validate();
  sim::RunOptions opt;
  opt.realtime = realtime;
  opt.parallel = !serial;
  opt.transport = transport == "http" ? sim::TransportKind::http : sim::TransportKind::loopback;
  const sim::RunResult res = sim::run(cfg, opt);
  sim::emit_report(res, out);
  fmt::print("{}: {} agents, {} simulated s, {} orders, {} trades, wall {:.1f} s\n", cfg.name, cfg.agent_count(),
             cfg.t_close, res.orders, res.trades, res.wall_seconds);
  fmt::print("conservation: {}\n", res.conserved() ? "balanced" : "UNBALANCED");
  for (std::size_t k = 0; k < res.facts.size(); ++k) {
    const auto& f = res.facts[k];
    fmt::print("asset {}: {} mid changes, stylized facts {}\n", k, res.history[k].size(),
               f.inconclusive ? "inconclusive" : (f.passed() ? "pass" : "fail"));
  }
  fmt::print("report written to {}\n", out);
  return res.conserved() && res.invariant_violations.empty() ? 0 : 3;
}

int do_validate(const std::string& series, const std::string& out) {
  const std::size_t passed = sim::validate_series(series, out);
  std::ifstream f(std::filesystem::path(out) / "summary.txt");
  std::cout << f.rdbuf();
  fmt::print("{} asset(s) passed; report written to {}\n", passed, out);
  return 0;
}

int do_replay(const std::string& log, const std::string& snapshot_out) {
  std::ifstream f(log, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + log);
  std::stringstream ss;
  ss << f.rdbuf();
  const auto events = exchange::read_log(ss.str());
  exchange::SimClock clock;
  try {
    auto ex = exchange::Exchange::replay(events, clock);
    const auto violations = ex->check_invariants();
    fmt::print("replayed {} events, last seq {}, {} invariant violations\n", events.size(), ex->last_seq(),
               violations.size());
    if (!snapshot_out.empty()) {
      std::ofstream o(snapshot_out, std::ios::binary);
      o << ex->snapshot();
    }
    return violations.empty() ? 0 : 3;
  } catch (const exchange::ReplayError& e) {
    fmt::print(stderr, "replay failed: {}\n", e.what());
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based continuous double auction simulator"};
  app.require_subcommand(1);

  std::string scenario, out = "out", transport = "loopback", series, log, snapshot_out;
  std::optional<std::uint64_t> seed;
  std::optional<double> accel;
  bool realtime = false, serial = false;

  auto* run = app.add_subcommand("run", "run a scenario and write its report");
  run->add_option("--scenario", scenario, "preset name or config file")->required();
  run->add_option("--seed", seed, "root seed (overrides the scenario)");
  run->add_option("--out", out, "output directory");
  run->add_flag("--realtime", realtime, "pace the clock against wall time");
  run->add_option("--accel", accel, "simulated seconds per wall second in realtime mode");
  run->add_option("--transport", transport, "loopback or http")->check(CLI::IsMember({"loopback", "http"}));
  run->add_flag("--serial", serial, "run the decide phase serially");

  auto* validate = app.add_subcommand("validate", "check a price series for stylized facts");
  validate->add_option("--series", series, "CSV with t,asset,p_mid")->required()->check(CLI::ExistingFile);
  validate->add_option("--out", out, "output directory");

  auto* replay = app.add_subcommand("replay", "rebuild exchange state from an event log");
  replay->add_option("--log", log, "event log")->required()->check(CLI::ExistingFile);
  replay->add_option("--snapshot", snapshot_out, "write the rebuilt state here");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return do_run(scenario, seed, out, realtime, accel, transport, serial);
    if (*validate) return do_validate(series, out);
    return do_replay(log, snapshot_out);
  } catch (const sim::ConfigError& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 64;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 1;
  }
}
