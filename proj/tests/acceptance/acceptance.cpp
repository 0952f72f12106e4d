// Acceptance checks, one line per criterion. Exit status is non-zero when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "cdasim/estimators/moments.hpp"
#include "cdasim/estimators/rls.hpp"
#include "cdasim/exchange/exchange.hpp"
#include "cdasim/ia/policy.hpp"
#include "cdasim/market/order_book.hpp"
#include "cdasim/protocol/client.hpp"
#include "cdasim/protocol/transport.hpp"
#include "cdasim/sim/simulation.hpp"
#include "oracles/batch.hpp"
#include "oracles/grid_oracle.hpp"
#include "oracles/ia_states.hpp"
#include "oracles/order_stream.hpp"
#include "oracles/reference_matcher.hpp"

using namespace cdasim;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string trade_log(const std::vector<Trade>& trades) {
  std::string s;
  for (const auto& t : trades) s += to_log_record(t) + "\n";
  return s;
}

Outcome matching_oracle() {
  const auto start = Clock::now();
  int identical = 0;
  std::size_t trades = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto stream = oracle::random_order_stream(seed, 10000);
    OrderBook book(0);
    oracle::ReferenceMatcher ref;
    std::vector<Trade> ours, theirs;
    for (const Order& o : stream) {
      if (o.kind == OrderKind::cancel) {
        book.cancel(o.target);
        ref.cancel(o.target);
        continue;
      }
      const Execution e = o.kind == OrderKind::limit ? book.place_limit(o) : book.place_market(o);
      ours.insert(ours.end(), e.trades.begin(), e.trades.end());
      const auto r = ref.submit(o);
      theirs.insert(theirs.end(), r.begin(), r.end());
    }
    trades += ours.size();
    identical += trade_log(ours) == trade_log(theirs);
  }
  const double t = seconds_since(start);
  return {identical == 100 && t < 10.0,
          fmt::format("{}/100 streams byte-identical, {} trades, {:.2f} s (limit 10 s)", identical, trades, t)};
}

sim::ScenarioConfig small(std::uint64_t seed) {
  sim::ScenarioConfig c = *sim::preset("small-univariate");
  c.seed = seed;
  return c;
}

Outcome conservation(const sim::RunResult& r, double t) {
  std::string shares;
  for (Quantity d : r.audit.share_delta) shares += fmt::format("{}{}", shares.empty() ? "" : ";", d);
  return {r.conserved() && r.invariant_violations.empty() && t < 120.0,
          fmt::format("cash delta {} cents, share delta {}, {} trades over {} s simulated, {:.2f} s (limit 120 s)",
                      r.audit.cash_delta.cents, shares, r.trades, r.config.t_close, t)};
}

Outcome rls_ols() {
  const auto start = Clock::now();
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const int d = i % 2 == 0 ? 4 : 6;
    const int m = 200;
    Eigen::MatrixXd a(m, d);
    Eigen::VectorXd y(m);
    Eigen::VectorXd truth = Eigen::VectorXd::NullaryExpr(d, [&] { return 5.0 * n01(rng); });
    RlsEstimator est(d);
    for (int r = 0; r < m; ++r) {
      a(r, 0) = 1.0;
      for (int j = 1; j < d; ++j) a(r, j) = n01(rng);
      y(r) = a.row(r).dot(truth) + n01(rng);
      const Eigen::VectorXd row = a.row(r).transpose();
      est.update(std::span<const double>(row.data(), static_cast<std::size_t>(d)), y(r));
    }
    const Eigen::VectorXd ols = oracle::batch_ols(a, y);
    const double rel = (est.coefficients() - ols).norm() / ols.norm();
    worst = std::max(worst, rel);
    agree += rel <= 1e-6;
  }
  const double t = seconds_since(start);
  return {agree == 1000 && t < 5.0,
          fmt::format("{}/1000 datasets within 1e-6 relative (worst {:.2e}), {:.2f} s (limit 5 s)", agree, worst, t)};
}

Outcome online_variance() {
  std::mt19937_64 rng(5);
  double worst = 0.0;
  int agree = 0;
  const struct {
    double mean, sd;
  } cases[] = {{0.0, 1.0}, {1e6, 1.0}, {100.0, 1e-3}, {-50.0, 25.0}};
  for (const auto& c : cases) {
    std::normal_distribution<double> dist(c.mean, c.sd);
    std::vector<double> xs(100000);
    OnlineMoments m;
    for (double& x : xs) {
      x = dist(rng);
      m.add(x);
    }
    const double ref = oracle::two_pass_variance(xs);
    const double rel = std::abs(m.variance() - ref) / ref;
    worst = std::max(worst, rel);
    agree += rel <= 1e-10;
  }
  return {agree == 4, fmt::format("{}/4 streams of 1e5 within 1e-10 relative (worst {:.2e})", agree, worst)};
}

Outcome solver_oracles() {
  const ia::Grid eps{-0.5, 1.0, 0.01};
  constexpr double kCoarse = 0.01, kFine = 0.001, kSlack = 1e-9;
  std::mt19937_64 rng(2025);
  int target_ok = 0, skew_ok = 0, hedge_ok = 0;
  for (int i = 0; i < 1000; ++i) {
    const oracle::IaState s = oracle::random_ia_state(rng);
    const ia::Curve flow = [&](double e) { return s.models.expected_flow(s.mid, s.sref, e); };
    const ia::Curve pnl = [&](double e) { return s.models.expected_pnl(s.mid, s.sref, e); };
    const double sign = s.inventory > 0 ? -1.0 : 1.0;

    const double t = ia::solve_target_eps(eps, flow, s.volume, 0.25, 0.05, 0.0);
    target_ok += std::abs(t - oracle::target_eps(-0.5, 1.0, kFine, flow, s.volume, 0.25, 0.05)) <= kCoarse + kSlack;

    const ia::SkewInputs in{s.sref, s.gamma, s.models.var_pnl(), s.models.var_flow(), s.sigma, s.inventory, sign};
    const double k = ia::solve_skew_eps(eps, pnl, flow, in);
    const double kf = oracle::skew_eps(-0.5, 1.0, kFine, pnl, flow, s.sref, s.gamma, in.var_pnl, in.var_flow, s.sigma,
                                       s.inventory, sign);
    skew_ok += std::abs(k - kf) <= kCoarse + kSlack;

    const ia::HedgeInputs h{s.inventory, s.sref, s.gamma, s.sigma, flow(k), s.models.var_flow(), 3000.0, sign};
    const double x = ia::solve_hedge_fraction(0.01, h);
    const double xf = oracle::hedge_fraction(kFine, h.inventory, h.ref_spread, h.risk_aversion, h.sigma,
                                             h.expected_flow, h.var_flow, h.inventory_limit, sign);
    hedge_ok += std::abs(x - xf) <= kCoarse + kSlack;
  }
  return {target_ok == 1000 && skew_ok == 1000 && hedge_ok == 1000,
          fmt::format("target {}/1000, skew {}/1000, hedge {}/1000 within one grid step of a 10x finer grid",
                      target_ok, skew_ok, hedge_ok)};
}

Outcome stylized_facts() {
  const auto start = Clock::now();
  int passed = 0, tails = 0, no_acf = 0, clustering = 0, gaussianity = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const stats::RunReport f = sim::run(small(seed)).facts.at(0);
    passed += f.passed();
    tails += f.heavy_tails == stats::Verdict::pass;
    no_acf += f.no_autocorrelation == stats::Verdict::pass;
    clustering += f.volatility_clustering == stats::Verdict::pass;
    gaussianity += f.aggregational_gaussianity == stats::Verdict::pass;
  }
  const double t = seconds_since(start);
  return {passed >= 8 && t < 1800.0,
          fmt::format("{}/10 runs show every fact (need 8); per fact (a) {}/10 (b) {}/10 (c,d) {}/10 (f) {}/10, "
                      "{:.1f} s (limit 1800 s)",
                      passed, tails, no_acf, clustering, gaussianity, t)};
}

Outcome ia_stabilization() {
  int spread_lower = 0, variance_lower = 0, both = 0;
  std::string rows;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const sim::ScenarioConfig with_ia = small(seed);
    sim::ScenarioConfig two_mm = with_ia;
    two_mm.n_mm = 2;
    two_mm.n_ia = 0;
    const sim::MarketQuality a = sim::market_quality(sim::run(with_ia).quotes, 0);
    const sim::MarketQuality b = sim::market_quality(sim::run(two_mm).quotes, 0);
    const bool s = a.mean_spread < b.mean_spread, v = a.return_variance < b.return_variance;
    spread_lower += s;
    variance_lower += v;
    both += s && v;
    rows += fmt::format(" s{}:{}{}", seed, s ? 'S' : 's', v ? 'V' : 'v');
  }
  return {both == 5, fmt::format("spread lower {}/5, return variance lower {}/5, both {}/5 (need 5) [{} ]",
                                 spread_lower, variance_lower, both, rows)};
}

Outcome throughput() {
  exchange::SimClock clock;
  exchange::Exchange ex(clock);
  ex.list_asset();
  std::vector<AccountId> accounts;
  for (int i = 0; i < 20; ++i) accounts.push_back(ex.open_account(protocol::AccountKind::dealer, Money{}, {0}));
  ex.open_market();
  const exchange::Totals initial = ex.totals();

  std::vector<protocol::ClientSession> sessions;
  for (AccountId id : accounts)
    sessions.emplace_back(std::make_unique<protocol::LoopbackTransport>(
                              [&ex](const protocol::WireRequest& r) { return ex.handle_wire(r); }),
                          id);

  std::mt19937_64 rng(8);
  std::uniform_int_distribution<int> offset(-10, 10);
  std::uniform_int_distribution<Quantity> qty(1, 100);
  constexpr int kOrders = 50000;
  const auto start = Clock::now();
  for (int i = 0; i < kOrders; ++i) {
    protocol::ClientSession& s = sessions[static_cast<std::size_t>(i) % sessions.size()];
    const Side side = rng() % 2 ? Side::buy : Side::sell;
    if (rng() % 4 == 0)
      s.submit_market(0, side, qty(rng));
    else
      s.submit_limit(0, side, qty(rng), Price{10000 + (side == Side::buy ? -2 : 2) + offset(rng)});
  }
  const double t = seconds_since(start);
  const double rate = kOrders / t;
  const bool balanced = ex.conservation_audit(initial).balanced();
  return {rate >= 1000.0 && balanced,
          fmt::format("{:.0f} orders/s over {} loopback orders ({} trades), ledger {} (need >= 1000/s)", rate, kOrders,
                      ex.trades().size(), balanced ? "balanced" : "UNBALANCED")};
}

Outcome determinism(const sim::RunResult& first) {
  const sim::RunResult second = sim::run(first.config);
  const std::string a = exchange::write_log(first.events), b = exchange::write_log(second.events);
  return {a == b && first.snapshot == second.snapshot,
          fmt::format("two runs of seed {}: {} events each, logs {}", first.config.seed, first.events.size(),
                      a == b ? "identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int number, const char* name, const std::function<Outcome()>& check) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("criterion %d %-22s %s  %s  [%.2f s]\n", number, name, o.pass ? "PASS" : "FAIL", o.detail.c_str(),
                seconds_since(start));
    std::fflush(stdout);
  };

  report(1, "matching-oracle", matching_oracle);
  sim::RunResult hour;
  report(2, "conservation", [&] {
    const auto start = Clock::now();
    hour = sim::run(small(42));
    return conservation(hour, seconds_since(start));
  });
  report(3, "rls-ols", rls_ols);
  report(4, "online-variance", online_variance);
  report(5, "ia-solver-oracles", solver_oracles);
  report(6, "stylized-facts", stylized_facts);
  report(7, "ia-stabilization", ia_stabilization);
  report(8, "loopback-throughput", throughput);
  report(9, "determinism", [&] { return determinism(hour); });
  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
