#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "cdasim/stats/facts.hpp"
#include "cdasim/stats/plot.hpp"
#include "oracles/series.hpp"

using namespace cdasim::stats;

TEST_CASE("log returns") {
  const std::vector<double> p{100, 110};
  auto r = log_returns(p, 1);
  REQUIRE(r.values.size() == 1);
  CHECK(r.values[0] == doctest::Approx(std::log(1.1)));

  const std::vector<double> q{100, 105, 110, 100, 90};
  r = log_returns(q, 2);
  REQUIRE(r.values.size() == 2);
  CHECK(r.values[0] == doctest::Approx(std::log(110.0 / 100.0)));
  CHECK(r.values[1] == doctest::Approx(std::log(90.0 / 110.0)));

  const std::vector<double> flat(10, 42.0);
  for (double v : log_returns(flat).values) CHECK(v == 0.0);

  const std::vector<double> bad{100, 0, 101};
  CHECK_THROWS_AS(log_returns(bad), StatsError);
  CHECK_THROWS_AS(log_returns(p, 2), StatsError);
}

TEST_CASE("acf basics") {
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  const AcfResult r = acf(alt, 3);
  CHECK(r.at(1) == doctest::Approx(-1.0).epsilon(2e-3));
  CHECK(r.at(2) == doctest::Approx(1.0).epsilon(3e-3));
  CHECK(r.band == doctest::Approx(1.96 / std::sqrt(1000.0)));

  const std::vector<double> flat(100, 3.0);
  CHECK_THROWS_AS(acf(flat, 5), StatsError);
  CHECK_THROWS_AS(acf(alt, 1000), StatsError);
}

TEST_CASE("acf matches the textbook oracle and is scale and reversal invariant") {
  const auto x = oracle::garch_returns(11, 5000);
  const AcfResult par = acf(x, 50);
  const AcfResult ser = acf_serial(x, 50);
  const auto naive = oracle::naive_acf(x, 50);
  CHECK(par.correlation == ser.correlation);
  for (std::size_t k = 1; k <= 50; ++k) CHECK(par.at(k) == doctest::Approx(naive[k - 1]).epsilon(1e-9));

  std::vector<double> scaled = x, reversed(x.rbegin(), x.rend());
  for (double& v : scaled) v *= 7.0;
  const AcfResult s = acf(scaled, 50), rv = acf(reversed, 50);
  for (std::size_t k = 1; k <= 50; ++k) {
    CHECK(s.at(k) == doctest::Approx(par.at(k)).epsilon(1e-12));
    CHECK(rv.at(k) == doctest::Approx(par.at(k)).epsilon(1e-9));
    CHECK(std::abs(par.at(k)) <= 1.0);
  }
}

TEST_CASE("white noise acf stays inside the band") {
  const auto x = oracle::white_noise(3, 10000);
  const AcfResult r = acf(x, 50);
  CHECK(inside_fraction(r, 1, 50) >= 0.95);
}

TEST_CASE("excess kurtosis") {
  std::vector<double> alt(1000);
  for (std::size_t i = 0; i < alt.size(); ++i) alt[i] = i % 2 ? -1.0 : 1.0;
  CHECK(excess_kurtosis(alt) == doctest::Approx(-2.0));

  CHECK(std::abs(excess_kurtosis(oracle::white_noise(5, 100000))) < 0.05);

  std::mt19937_64 rng(8);
  std::student_t_distribution<double> t3(3.0);
  std::vector<double> heavy(100000);
  for (double& v : heavy) v = t3(rng);
  CHECK(excess_kurtosis(heavy) > 1.0);

  std::vector<double> rev(heavy.rbegin(), heavy.rend());
  CHECK(excess_kurtosis(rev) == doctest::Approx(excess_kurtosis(heavy)).epsilon(1e-9));
  CHECK_THROWS_AS(excess_kurtosis(std::vector<double>{1, 1, 1, 1}), StatsError);
  CHECK_THROWS_AS(excess_kurtosis(std::vector<double>{1, 2, 3}), StatsError);
}

TEST_CASE("nonlinear suite") {
  const auto g = oracle::garch_returns(21, 20000);
  const auto suite = nonlinear_acf_suite(g, 20);
  REQUIRE(suite.size() == 5);
  CHECK(suite[1].acf.correlation == suite[2].acf.correlation);  // r^2 and |r^2|
  for (std::size_t k = 1; k <= 20; ++k) CHECK(suite[0].acf.at(k) > suite[0].acf.band);

  const auto w = oracle::white_noise(22, 10000);
  for (const auto& s : nonlinear_acf_suite(w, 50)) CHECK(inside_fraction(s.acf, 1, 50) >= 0.90);
}

TEST_CASE("first passage") {
  // rising by one log-unit per tick: returns are constant, so perturb one step
  // to get a non-zero std and check a known crossing
  std::vector<double> p{100};
  for (int i = 0; i < 40; ++i) p.push_back(p.back() * std::exp(i == 20 ? 0.02 : 0.01));
  const FirstPassage fp = first_passage_serial(p, 1.0);
  // std of returns: 39 values of 0.01 and one 0.02
  const double mean = (39 * 0.01 + 0.02) / 40;
  const double sd = std::sqrt((39 * (0.01 - mean) * (0.01 - mean) + (0.02 - mean) * (0.02 - mean)) / 40);
  CHECK(fp.rho == doctest::Approx(sd));
  REQUIRE(!fp.gain.empty());
  CHECK(fp.gain[0] == static_cast<std::size_t>(std::ceil(sd / 0.01 - 1e-12)));
  CHECK(fp.loss.empty());
  CHECK(fp.loss_censored == p.size());

  // antisymmetric path: gains of one are losses of the other
  const auto r = oracle::white_noise(4, 3000, 0.001);
  std::vector<double> neg = r;
  for (double& v : neg) v = -v;
  const FirstPassage up = first_passage_times(oracle::price_path(r), 3.0);
  const FirstPassage down = first_passage_times(oracle::price_path(neg), 3.0);
  CHECK(up.gain.size() > 0);
  CHECK(up.gain.size() + up.gain_censored == 3001);

  CHECK(up.gain.size() == down.loss.size());
  CHECK(up.loss == down.gain);
  CHECK(up.gain == down.loss);
}

TEST_CASE("pruned parallel first passage equals the full scan") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto prices = oracle::price_path(oracle::garch_returns(seed, 4000));
    const FirstPassage a = first_passage_times(prices, 5.0);
    const FirstPassage b = first_passage_serial(prices, 5.0);
    CHECK(a.rho == b.rho);
    CHECK(a.gain == b.gain);
    CHECK(a.loss == b.loss);
    CHECK(a.gain_censored == b.gain_censored);
    CHECK(a.loss_censored == b.loss_censored);
  }
}

TEST_CASE("first passage mean matches a brute-force path scan") {
  const auto prices = oracle::price_path(oracle::white_noise(9, 3000, 0.002));
  const FirstPassage fp = first_passage_times(prices, 5.0);
  // independent scan written against the definition
  std::vector<double> lp;
  for (double p : prices) lp.push_back(std::log(p));
  double sum = 0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < lp.size(); ++t) {
    for (std::size_t j = t + 1; j < lp.size(); ++j) {
      if (lp[j] - lp[t] >= fp.rho) {
        sum += static_cast<double>(j - t);
        ++n;
        break;
      }
    }
  }
  REQUIRE(n == fp.gain.size());
  const PassageSummary s = summarize(fp.gain, fp.gain_censored);
  CHECK(s.mean == doctest::Approx(sum / static_cast<double>(n)));
  CHECK(s.censored_fraction == doctest::Approx(static_cast<double>(fp.gain_censored) / 3001.0));
}

TEST_CASE("validate_run verdicts") {
  SUBCASE("gaussian random walk: no heavy tails, no autocorrelation") {
    const RunReport r = validate_run(oracle::price_path(oracle::white_noise(31, 10000, 0.001)));
    REQUIRE(!r.inconclusive);
    CHECK(r.heavy_tails == Verdict::fail);
    CHECK(r.no_autocorrelation == Verdict::pass);
    CHECK(!r.passed());
  }
  SUBCASE("heavy tails with clustering") {
    const RunReport r = validate_run(oracle::price_path(oracle::garch_returns(32, 20000)));
    REQUIRE(!r.inconclusive);
    CHECK(r.heavy_tails == Verdict::pass);
    CHECK(r.volatility_clustering == Verdict::pass);
    CHECK(r.above_fraction >= 0.6);
  }
  SUBCASE("flat and short series are inconclusive") {
    CHECK(validate_run(std::vector<double>(5000, 100.0)).inconclusive);
    CHECK(validate_run(std::vector<double>(100, 100.0)).inconclusive);
  }
  SUBCASE("price scale invariance") {
    auto p = oracle::price_path(oracle::garch_returns(33, 5000));
    const RunReport a = validate_run(p);
    for (double& v : p) v *= 3.5;
    const RunReport b = validate_run(p);
    CHECK(a.excess_kurtosis == doctest::Approx(b.excess_kurtosis).epsilon(1e-8));
    CHECK(a.inside_fraction == b.inside_fraction);
    CHECK(a.above_fraction == b.above_fraction);
  }
}

TEST_CASE("report csv and panels") {
  const auto prices = oracle::price_path(oracle::garch_returns(40, 5000));
  const RunReport r = validate_run(prices);
  const std::string csv = report_csv({{0, r}}, FactThresholds{});
  CHECK(csv.rfind("asset,fact,statistic,value,threshold,verdict\n", 0) == 0);
  CHECK(csv.find("0,a,excess_kurtosis,") != std::string::npos);
  CHECK(csv.find("0,all,passed,") != std::string::npos);
  const auto panels = fact_panels(r);
  REQUIRE(panels.size() == 6);
  for (const auto& p : panels) {
    CHECK(p.svg.rfind("<svg", 0) == 0);
    CHECK(p.svg.find("</svg>") != std::string::npos);
  }
  CHECK(fact_panels(r)[3].svg == panels[3].svg);
  CHECK(fact_panels(validate_run(std::vector<double>(10, 1.0))).size() == 6);
}
