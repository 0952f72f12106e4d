#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "cdasim/protocol/wire.hpp"
#include "cdasim/sim/simulation.hpp"
#include "cdasim/stats/plot.hpp"

namespace cdasim::sim {

namespace fs = std::filesystem;
using protocol::format_number;

namespace {

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << content;
  if (!f.flush()) throw std::runtime_error("write failed: " + path.string());
}

std::string opt_price(const std::optional<Price>& p) { return p ? format_price(*p) : std::string(); }

std::string fact_summary(const stats::RunReport& r) {
  if (r.inconclusive) return fmt::format("inconclusive ({})", *r.inconclusive);
  return fmt::format("(a) {} kurtosis={:.4g}  (b) {} inside={:.3f}  (c/d) {} above={:.3f}  (f) {} {:.4g}>{:.4g}  => {}",
                     to_string(r.heavy_tails), r.excess_kurtosis, to_string(r.no_autocorrelation), r.inside_fraction,
                     to_string(r.volatility_clustering), r.above_fraction, to_string(r.aggregational_gaussianity),
                     r.kurtosis_fine, r.kurtosis_coarse, r.passed() ? "pass" : "fail");
}

void write_panels(const fs::path& dir, std::size_t asset, const stats::RunReport& r) {
  for (const stats::Panel& p : stats::fact_panels(r))
    write_file(dir / fmt::format("asset{}_{}.svg", asset, p.name), p.svg);
}

}  // namespace

void emit_report(const RunResult& res, const fs::path& dir) {
  fs::create_directories(dir);
  const std::size_t k_assets = res.history.size();

  std::string prices = "t,asset,p_mid\n";
  for (std::size_t k = 0; k < k_assets; ++k)
    for (const auto& p : res.history[k]) prices += fmt::format("{},{},{}\n", format_number(p.time), k, format_mid(p.mid));
  write_file(dir / "prices.csv", prices);

  std::string quotes = "t,asset,bid,ask,mid\n";
  for (const QuoteSample& q : res.quotes)
    quotes += fmt::format("{},{},{},{},{}\n", format_number(q.time), q.asset, opt_price(q.quote.bid),
                          opt_price(q.quote.ask), q.quote.mid ? format_mid(*q.quote.mid) : std::string());
  write_file(dir / "quotes.csv", quotes);

  std::string trades = "t,trade,asset,price,qty,maker_order,taker_order,maker_account,taker_account,taker_side\n";
  for (const auto& e : res.events) {
    const auto* ts = std::get_if<exchange::TradeSettled>(&e.payload);
    if (!ts) continue;
    const Trade& t = ts->trade;
    trades += fmt::format("{},{},{},{},{},{},{},{},{},{}\n", format_number(e.time), t.seq, t.asset,
                          format_price(t.price), t.quantity, t.maker_order, t.taker_order, t.maker_account,
                          t.taker_account, to_string(t.taker_side));
  }
  write_file(dir / "trades.csv", trades);
  write_file(dir / "events.log", exchange::write_log(res.events));
  write_file(dir / "snapshot.txt", res.snapshot);

  std::vector<std::pair<std::size_t, stats::RunReport>> reports;
  for (std::size_t k = 0; k < res.facts.size(); ++k) reports.emplace_back(k, res.facts[k]);
  write_file(dir / "report.csv", stats::report_csv(reports, stats::FactThresholds{}));

  for (const auto& [index, rows] : res.ia_diagnostics)
    write_file(dir / fmt::format("ia{}_diagnostics.csv", index), ia::diagnostics_csv(rows));

  for (std::size_t k = 0; k < k_assets; ++k) {
    stats::Line mid{"mid", {}, {}, stats::Style::line}, bid{"bid", {}, {}, stats::Style::line},
        ask{"ask", {}, {}, stats::Style::line}, spread{"ask - bid", {}, {}, stats::Style::line};
    for (const QuoteSample& q : res.quotes) {
      if (q.asset != k) continue;
      if (q.quote.mid) mid.x.push_back(q.time), mid.y.push_back(q.quote.mid->value());
      if (q.quote.bid) bid.x.push_back(q.time), bid.y.push_back(q.quote.bid->value());
      if (q.quote.ask) ask.x.push_back(q.time), ask.y.push_back(q.quote.ask->value());
      if (q.quote.bid && q.quote.ask)
        spread.x.push_back(q.time), spread.y.push_back(q.quote.ask->value() - q.quote.bid->value());
    }
    write_file(dir / fmt::format("asset{}_price.svg", k),
               stats::render_svg({fmt::format("asset {} mid, bid and ask", k), "simulated seconds", "price",
                                  {mid, bid, ask}, {}, false}));
    write_file(dir / fmt::format("asset{}_spread.svg", k),
               stats::render_svg({fmt::format("asset {} bid-ask spread", k), "simulated seconds", "spread",
                                  {spread}, {}, false}));
    write_panels(dir, k, res.facts[k]);
  }

  std::string s;
  s += "# scenario\n" + to_text(res.config) + "\n";
  s += fmt::format("events {}\norders {}\ntrades {}\n", res.events.size(), res.orders, res.trades);
  s += fmt::format("conservation cash_delta={} share_delta=", format_money(res.audit.cash_delta));
  for (std::size_t k = 0; k < res.audit.share_delta.size(); ++k)
    s += fmt::format("{}{}", k ? ";" : "", res.audit.share_delta[k]);
  s += fmt::format(" {}\n", res.conserved() ? "balanced" : "UNBALANCED");
  s += fmt::format("invariant_violations {}\n", res.invariant_violations.size());
  for (const auto& v : res.invariant_violations) s += "  " + v + "\n";
  s += "\n# pnl (marked to the closing mid)\nrole,agents,total,mean,profitable\n";
  for (const RolePnl& p : res.pnl)
    s += fmt::format("{},{},{:.2f},{:.2f},{}\n", agents::to_string(p.role), p.agents, p.total, p.mean, p.profitable);
  s += "\n# markets\n";
  for (std::size_t k = 0; k < k_assets; ++k) {
    const MarketQuality q = market_quality(res.quotes, static_cast<AssetId>(k));
    s += fmt::format("asset {} initial_mid={} mid_changes={} mean_spread={:.5f} return_variance={:.6e}\n", k,
                     format_price(res.setup.initial_mids[k]), res.history[k].size(), q.mean_spread,
                     q.return_variance);
    s += fmt::format("asset {} facts {}\n", k, fact_summary(res.facts[k]));
  }
  write_file(dir / "summary.txt", s);
}

std::vector<PriceSeries> read_price_csv(const std::string& text) {
  std::vector<PriceSeries> out;
  std::map<AssetId, std::size_t> slot;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || (line_no == 1 && line.rfind("t,", 0) == 0)) continue;
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string::npos) throw std::runtime_error(fmt::format("price csv line {}: expected t,asset,p_mid", line_no));
    try {
      const double t = std::stod(line.substr(0, c1));
      const auto asset = static_cast<AssetId>(std::stoul(line.substr(c1 + 1, c2 - c1 - 1)));
      const double mid = std::stod(line.substr(c2 + 1));
      auto [it, fresh] = slot.emplace(asset, out.size());
      if (fresh) out.push_back(PriceSeries{asset, {}, {}});
      out[it->second].times.push_back(t);
      out[it->second].mids.push_back(mid);
    } catch (const std::logic_error&) {
      throw std::runtime_error(fmt::format("price csv line {}: bad number", line_no));
    }
  }
  return out;
}

std::size_t validate_series(const fs::path& csv, const fs::path& dir, const stats::FactThresholds& th) {
  std::ifstream f(csv, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + csv.string());
  std::stringstream ss;
  ss << f.rdbuf();
  const auto series = read_price_csv(ss.str());
  fs::create_directories(dir);
  std::vector<std::pair<std::size_t, stats::RunReport>> reports;
  std::string summary;
  std::size_t passed = 0;
  for (const PriceSeries& s : series) {
    stats::RunReport r = stats::validate_run(s.mids, th);
    passed += r.passed();
    summary += fmt::format("asset {} points={} {}\n", s.asset, s.mids.size(), fact_summary(r));
    write_panels(dir, s.asset, r);
    reports.emplace_back(s.asset, std::move(r));
  }
  write_file(dir / "report.csv", stats::report_csv(reports, th));
  write_file(dir / "summary.txt", summary);
  return passed;
}

}  // namespace cdasim::sim
