#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "cdasim/sim/simulation.hpp"

using namespace cdasim;
using namespace cdasim::sim;
namespace fs = std::filesystem;

namespace {

ScenarioConfig short_small(double t_close, std::uint64_t seed = 7) {
  ScenarioConfig c = *preset("small-univariate");
  c.t_close = t_close;
  c.seed = seed;
  return c;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("cdasim_test_sim_" + name);
  fs::remove_all(p);
  return p;
}

std::size_t total_points(const RunResult& r) {
  std::size_t n = 0;
  for (const auto& h : r.history) n += h.size();
  return n;
}

}  // namespace

TEST_CASE("presets carry the published parameters") {
  const ScenarioConfig s = *preset("small-univariate");
  CHECK(s.n_lt == 70);
  CHECK(s.n_lp == 70);
  CHECK(s.n_mm == 1);
  CHECK(s.n_ia == 1);
  CHECK(s.cash_min == 5000);
  CHECK(s.cash_max == 15000);
  CHECK(s.shares_min == 50);
  CHECK(s.shares_max == 150);
  CHECK(s.freq_lt == 5);
  CHECK(s.freq_lp == 10);
  CHECK(s.freq_mm == 2);
  CHECK(s.freq_ia == 2);
  CHECK(s.assets == 1);

  const ScenarioConfig l = *preset("large-multivariate");
  CHECK(l.n_lt == 8000);
  CHECK(l.n_lp == 100000);
  CHECK(l.n_mm == 500);
  CHECK(l.n_ia == 0);
  CHECK(l.assets == 30);

  const ScenarioConfig r = *preset("medium-reduced");
  CHECK(r.n_lt == 65);
  CHECK(r.n_lp == 585);
  CHECK(r.n_mm == 20);
  CHECK(r.assets == 5);
  CHECK_FALSE(preset("no-such-preset"));
}

TEST_CASE("config errors name the field") {
  auto field_of = [](const std::string& text) {
    try {
      parse_scenario(text);
    } catch (const ConfigError& e) {
      return e.field();
    }
    return std::string("<none>");
  };
  CHECK(field_of("preset = small-univariate\nn_lt = -3\n") == "n_lt");
  CHECK(field_of("preset = small-univariate\ncash_max = 100\n") == "cash_max");
  CHECK(field_of("preset = small-univariate\nshares_min = 500\n") == "shares_max");
  CHECK(field_of("preset = small-univariate\nt_close = 0\n") == "t_close");
  CHECK(field_of("preset = small-univariate\nbogus = 1\n") == "bogus");
  CHECK(field_of("preset = nope\n") == "preset");
  CHECK(field_of("preset = small-univariate\nn_mm = many\n") == "n_mm");
  CHECK(field_of("preset = small-univariate\n# comment\nn_mm = 3  # trailing\n") == "<none>");
}

TEST_CASE("scenario text round-trips") {
  ScenarioConfig c = short_small(123.0, 99);
  c.lp.window = 40;
  c.mm.eps_max = 0.7;
  c.ia.risk_aversion = 0.2;
  const ScenarioConfig back = parse_scenario(to_text(c));
  CHECK(to_text(back) == to_text(c));
  CHECK(back.seed == 99);
  CHECK(back.lp.window == 40);
}

TEST_CASE("initialization conserves, balances, and is deterministic") {
  for (const char* name : {"small-univariate", "medium-reduced"}) {
    CAPTURE(name);
    const ScenarioConfig cfg = *preset(name);
    exchange::SimClock clock;
    exchange::Exchange ex(clock);
    const MarketSetup setup = initialize_market(cfg, ex);
    CHECK(ex.conservation_audit(setup.initial).balanced());
    CHECK(ex.check_invariants().empty());

    double cash = 0.0, value = 0.0;
    for (const AgentSlot& a : setup.agents) {
      cash += a.cash.value();
      for (std::size_t k = 0; k < a.holdings.size(); ++k)
        value += static_cast<double>(a.holdings[k]) * setup.initial_mids[k].value();
      if (a.role == agents::Role::market_maker || a.role == agents::Role::intelligent) {
        CHECK(a.cash.cents == 0);
        for (Quantity h : a.holdings) CHECK(h == 0);
      }
    }
    CHECK(std::abs(cash - value) / cash <= 0.05);
    for (std::size_t k = 0; k < cfg.assets; ++k) {
      CHECK(setup.initial_mids[k].value() >= 85.0);
      CHECK(setup.initial_mids[k].value() <= 115.0);
      const Quote q = ex.quote(static_cast<AssetId>(k));
      REQUIRE(q.mid);
      CHECK(q.mid->value() == doctest::Approx(setup.initial_mids[k].value()));
    }

    exchange::SimClock clock2;
    exchange::Exchange ex2(clock2);
    initialize_market(cfg, ex2);
    CHECK(exchange::write_log(ex.events()) == exchange::write_log(ex2.events()));
  }
}

TEST_CASE("empty market gives a flat series and an inconclusive report") {
  ScenarioConfig c = short_small(3600.0);
  c.n_lt = c.n_lp = c.n_mm = c.n_ia = 0;
  const RunResult r = run(c);
  CHECK(r.conserved());
  CHECK(r.trades == 0);
  REQUIRE(r.facts.size() == 1);
  CHECK(r.facts[0].inconclusive);
  CHECK_FALSE(r.facts[0].passed());
}

TEST_CASE("same seed gives identical logs; serial and parallel decide agree") {
  const ScenarioConfig c = short_small(300.0, 11);
  const RunResult a = run(c);
  const RunResult b = run(c);
  RunOptions serial;
  serial.parallel = false;
  const RunResult s = run(c, serial);
  CHECK(a.trades > 0);
  CHECK(a.conserved());
  CHECK(a.invariant_violations.empty());
  const std::string log = exchange::write_log(a.events);
  CHECK(log == exchange::write_log(b.events));
  CHECK(log == exchange::write_log(s.events));
  CHECK(a.snapshot == s.snapshot);

  const RunResult other = run(short_small(300.0, 12));
  CHECK(log != exchange::write_log(other.events));
}

TEST_CASE("the event log of a run replays to the same state") {
  const RunResult r = run(short_small(200.0, 5));
  exchange::SimClock clock;
  const auto replayed = exchange::Exchange::replay(r.events, clock);
  CHECK(replayed->snapshot() == r.snapshot);
}

TEST_CASE("report layout, row counts, and byte-identical re-emission") {
  const RunResult r = run(short_small(600.0, 3));
  const fs::path one = scratch("one"), two = scratch("two");
  emit_report(r, one);
  emit_report(r, two);

  std::size_t panels = 0;
  for (const auto& e : fs::directory_iterator(one)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("asset0_fact_", 0) == 0 && e.path().extension() == ".svg") ++panels;
    CHECK(slurp(e.path()) == slurp(two / name));
  }
  CHECK(panels == 6);
  for (const char* f : {"prices.csv", "quotes.csv", "trades.csv", "events.log", "snapshot.txt", "report.csv",
                        "summary.txt", "asset0_price.svg", "asset0_spread.svg"})
    CHECK(fs::exists(one / f));
  CHECK(fs::exists(one / fmt::format("ia{}_diagnostics.csv", r.ia_diagnostics.at(0).first)));

  // one row per mid change, plus the header
  const std::string prices = slurp(one / "prices.csv");
  CHECK(static_cast<std::size_t>(std::count(prices.begin(), prices.end(), '\n')) == total_points(r) + 1);
  const auto series = read_price_csv(prices);
  REQUIRE(series.size() == 1);
  CHECK(series[0].mids.size() == r.history[0].size());
  for (std::size_t i = 1; i < series[0].mids.size(); ++i) CHECK(series[0].mids[i] != series[0].mids[i - 1]);

  const std::string trades = slurp(one / "trades.csv");
  CHECK(static_cast<std::size_t>(std::count(trades.begin(), trades.end(), '\n')) == r.trades + 1);
  CHECK(exchange::read_log(slurp(one / "events.log")).size() == r.events.size());
  CHECK(slurp(one / "summary.txt").find("balanced") != std::string::npos);

  fs::remove_all(one);
  fs::remove_all(two);
}

TEST_CASE("validate_series reads a price file and writes the report") {
  const RunResult r = run(short_small(600.0, 4));
  const fs::path run_dir = scratch("run"), out = scratch("validate");
  emit_report(r, run_dir);
  validate_series(run_dir / "prices.csv", out);
  CHECK(fs::exists(out / "report.csv"));
  CHECK(slurp(out / "report.csv") == slurp(run_dir / "report.csv"));
  std::size_t panels = 0;
  for (const auto& e : fs::directory_iterator(out)) panels += e.path().extension() == ".svg";
  CHECK(panels == 6);
  fs::remove_all(run_dir);
  fs::remove_all(out);
}

TEST_CASE("agent crash aborts the run with agent id and last sequence") {
  RunOptions o;
  o.fault = RunOptions::Fault{3, 10.0};
  try {
    run(short_small(100.0), o);
    FAIL("run should have aborted");
  } catch (const AgentCrash& e) {
    CHECK(e.agent() == 3);
    CHECK(e.last_seq() > 0);
    CHECK(std::string(e.what()).find("agent 3") != std::string::npos);
    CHECK(std::string(e.what()).find("injected fault") != std::string::npos);
  }
}

TEST_CASE("http transport runs the same market as loopback") {
  const ScenarioConfig c = short_small(30.0, 21);
  RunOptions http;
  http.transport = TransportKind::http;
  http.listen = "127.0.0.1:0";
  const RunResult h = run(c, http);
  const RunResult l = run(c);
  CHECK(h.conserved());
  CHECK(h.trades > 0);
  CHECK(exchange::write_log(h.events) == exchange::write_log(l.events));
}

TEST_CASE("market quality summarizes one-second quotes") {
  std::vector<QuoteSample> q;
  auto sample = [](double t, std::int64_t bid, std::int64_t ask) {
    Quote quote;
    quote.bid = Price{bid};
    quote.ask = Price{ask};
    quote.mid = MidPrice::of(Price{bid}, Price{ask});
    return QuoteSample{t, 0, quote};
  };
  q.push_back(sample(0, 9990, 10010));
  q.push_back(sample(1, 9995, 10005));
  q.push_back(QuoteSample{2, 0, Quote{}});
  q.push_back(sample(3, 9990, 10010));
  q.push_back(QuoteSample{0, 1, Quote{}});
  const MarketQuality m = market_quality(q, 0);
  CHECK(m.samples == 4);
  CHECK(m.mean_spread == doctest::Approx((0.2 + 0.1 + 0.2) / 3));
  CHECK(m.return_variance == doctest::Approx(0.0));
}
