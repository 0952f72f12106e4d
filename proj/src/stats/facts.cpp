#include "cdasim/stats/facts.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

namespace cdasim::stats {

namespace {

struct Centered {
  std::vector<double> dev;
  double denom = 0.0;  // sum of squared deviations
};

Centered center(std::span<const double> x) {
  if (x.size() < 2) throw StatsError("series needs at least two values");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  Centered c;
  c.dev.reserve(x.size());
  for (double v : x) {
    if (!std::isfinite(v)) throw StatsError("series contains a non-finite value");
    c.dev.push_back(v - mean);
    c.denom += c.dev.back() * c.dev.back();
  }
  // relative test so a constant series with rounding noise still counts as flat
  double scale = 0.0;
  for (double v : x) scale = std::max(scale, std::abs(v));
  if (c.denom <= 1e-24 * std::max(1.0, scale * scale) * static_cast<double>(x.size()))
    throw StatsError("series has zero variance");
  return c;
}

double lag_sum(const std::vector<double>& d, std::size_t lag) {
  double s = 0.0;
  for (std::size_t t = 0; t + lag < d.size(); ++t) s += d[t] * d[t + lag];
  return s;
}

AcfResult prepare(std::span<const double> x, std::size_t max_lag) {
  if (max_lag == 0 || x.size() <= max_lag) throw StatsError("series shorter than the maximum lag");
  AcfResult r;
  r.correlation.resize(max_lag);
  r.band = 1.96 / std::sqrt(static_cast<double>(x.size()));
  return r;
}

std::vector<double> log_prices(std::span<const double> prices) {
  std::vector<double> out;
  out.reserve(prices.size());
  for (double p : prices) {
    if (!(p > 0.0) || !std::isfinite(p)) throw StatsError("prices must be positive");
    out.push_back(std::log(p));
  }
  return out;
}

double return_std(const std::vector<double>& lp) {
  if (lp.size() < 3) throw StatsError("series needs at least three prices");
  std::vector<double> r(lp.size() - 1);
  for (std::size_t i = 1; i < lp.size(); ++i) r[i - 1] = lp[i] - lp[i - 1];
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
  double ss = 0.0;
  for (double v : r) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(r.size()));
  if (!(sd > 0.0)) throw StatsError("return series has zero variance");
  return sd;
}

// Hitting time of the level from `start`, or nothing.
std::optional<std::size_t> scan(const std::vector<double>& lp, std::size_t start, double level, bool up) {
  for (std::size_t j = start + 1; j < lp.size(); ++j) {
    const double move = lp[j] - lp[start];
    if (up ? move >= level : move <= -level) return j - start;
  }
  return std::nullopt;
}

FirstPassage collect(double rho, const std::vector<std::optional<std::size_t>>& gain,
                     const std::vector<std::optional<std::size_t>>& loss) {
  FirstPassage fp;
  fp.rho = rho;
  for (const auto& g : gain) g ? fp.gain.push_back(*g) : void(++fp.gain_censored);
  for (const auto& l : loss) l ? fp.loss.push_back(*l) : void(++fp.loss_censored);
  return fp;
}

}  // namespace

ReturnSeries log_returns(std::span<const double> prices, std::size_t stride) {
  if (stride == 0) throw StatsError("stride must be positive");
  if (prices.size() <= stride) throw StatsError("series shorter than the stride");
  const std::vector<double> lp = log_prices(prices);
  ReturnSeries out;
  out.stride = stride;
  for (std::size_t i = stride; i < lp.size(); i += stride) out.values.push_back(lp[i] - lp[i - stride]);
  return out;
}

AcfResult acf(std::span<const double> x, std::size_t max_lag) {
  AcfResult r = prepare(x, max_lag);
  const Centered c = center(x);
  const auto lags = static_cast<long>(max_lag);
#pragma omp parallel for schedule(dynamic, 4)
  for (long k = 1; k <= lags; ++k) r.correlation[k - 1] = lag_sum(c.dev, static_cast<std::size_t>(k)) / c.denom;
  return r;
}

AcfResult acf_serial(std::span<const double> x, std::size_t max_lag) {
  AcfResult r = prepare(x, max_lag);
  const Centered c = center(x);
  for (std::size_t k = 1; k <= max_lag; ++k) r.correlation[k - 1] = lag_sum(c.dev, k) / c.denom;
  return r;
}

double excess_kurtosis(std::span<const double> x) {
  if (x.size() < 4) throw StatsError("kurtosis needs at least four values");
  const Centered c = center(x);
  double m4 = 0.0;
  for (double d : c.dev) m4 += d * d * d * d;
  const double n = static_cast<double>(x.size());
  const double m2 = c.denom / n;
  return (m4 / n) / (m2 * m2) - 3.0;
}

std::string_view to_string(Transform t) {
  switch (t) {
    case Transform::abs: return "abs";
    case Transform::square: return "square";
    case Transform::abs_square: return "abs_square";
    case Transform::cosine: return "cos";
    case Transform::log1p_square: return "log1p_square";
  }
  return "?";
}

double apply(Transform t, double r) {
  switch (t) {
    case Transform::abs: return std::abs(r);
    case Transform::square: return r * r;
    case Transform::abs_square: return std::abs(r * r);
    case Transform::cosine: return std::cos(r);
    case Transform::log1p_square: return std::log1p(r * r);
  }
  return r;
}

std::vector<TransformAcf> nonlinear_acf_suite(std::span<const double> returns, std::size_t max_lag) {
  std::vector<TransformAcf> out;
  std::vector<double> tx(returns.size());
  for (Transform t : kTransforms) {
    std::transform(returns.begin(), returns.end(), tx.begin(), [t](double r) { return apply(t, r); });
    out.push_back({t, acf(tx, max_lag)});
  }
  return out;
}

FirstPassage first_passage_serial(std::span<const double> prices, double multiplier) {
  const std::vector<double> lp = log_prices(prices);
  const double rho = multiplier * return_std(lp);
  std::vector<std::optional<std::size_t>> gain(lp.size()), loss(lp.size());
  for (std::size_t t = 0; t < lp.size(); ++t) {
    gain[t] = scan(lp, t, rho, true);
    loss[t] = scan(lp, t, rho, false);
  }
  return collect(rho, gain, loss);
}

FirstPassage first_passage_times(std::span<const double> prices, double multiplier) {
  const std::vector<double> lp = log_prices(prices);
  const double rho = multiplier * return_std(lp);
  const std::size_t n = lp.size();
  // suffix extrema over j > t: a start whose future never reaches the level is
  // censored without scanning
  std::vector<double> hi(n, -INFINITY), lo(n, INFINITY);
  for (std::size_t t = n - 1; t-- > 0;) {
    hi[t] = std::max(hi[t + 1], lp[t + 1]);
    lo[t] = std::min(lo[t + 1], lp[t + 1]);
  }
  std::vector<std::optional<std::size_t>> gain(n), loss(n);
  const auto count = static_cast<long>(n);
#pragma omp parallel for schedule(dynamic, 256)
  for (long i = 0; i < count; ++i) {
    const auto t = static_cast<std::size_t>(i);
    if (hi[t] - lp[t] >= rho) gain[t] = scan(lp, t, rho, true);
    if (lp[t] - lo[t] >= rho) loss[t] = scan(lp, t, rho, false);
  }
  return collect(rho, gain, loss);
}

PassageSummary summarize(const std::vector<std::size_t>& times, std::size_t censored) {
  PassageSummary s;
  s.count = times.size();
  s.censored = censored;
  const std::size_t total = s.count + censored;
  s.censored_fraction = total ? static_cast<double>(censored) / static_cast<double>(total) : 0.0;
  if (times.empty()) return s;
  s.mean = std::accumulate(times.begin(), times.end(), 0.0) / static_cast<double>(times.size());
  std::vector<std::size_t> sorted = times;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size() / 2;
  s.median = sorted.size() % 2 ? static_cast<double>(sorted[m])
                               : 0.5 * static_cast<double>(sorted[m - 1] + sorted[m]);
  return s;
}

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double inside_fraction(const AcfResult& r, std::size_t lo, std::size_t hi) {
  hi = std::min(hi, r.max_lag());
  if (lo > hi) return 0.0;
  std::size_t inside = 0;
  for (std::size_t k = lo; k <= hi; ++k) inside += std::abs(r.at(k)) <= r.band;
  return static_cast<double>(inside) / static_cast<double>(hi - lo + 1);
}

double above_fraction(const AcfResult& r, std::size_t lo, std::size_t hi) {
  hi = std::min(hi, r.max_lag());
  if (lo > hi) return 0.0;
  std::size_t above = 0;
  for (std::size_t k = lo; k <= hi; ++k) above += r.at(k) > r.band;
  return static_cast<double>(above) / static_cast<double>(hi - lo + 1);
}

bool RunReport::passed() const {
  return !inconclusive && heavy_tails == Verdict::pass && no_autocorrelation == Verdict::pass &&
         volatility_clustering == Verdict::pass && aggregational_gaussianity == Verdict::pass;
}

RunReport validate_run(std::span<const double> prices, const FactThresholds& th) {
  RunReport rep;
  rep.points = prices.size();
  if (prices.size() < th.min_points) {
    rep.inconclusive = fmt::format("{} price points, need {}", prices.size(), th.min_points);
    return rep;
  }
  try {
    rep.returns = log_returns(prices, 1).values;
    rep.coarse_returns = log_returns(prices, th.coarse_stride).values;
    const std::size_t max_lag = std::max(th.acf_lag_hi, th.clustering_lag_hi);
    rep.excess_kurtosis = excess_kurtosis(rep.returns);
    rep.return_acf = acf(rep.returns, max_lag);
    rep.suite = nonlinear_acf_suite(rep.returns, max_lag);
    rep.kurtosis_fine = rep.excess_kurtosis;
    rep.kurtosis_coarse = excess_kurtosis(rep.coarse_returns);
    rep.passage = first_passage_times(prices, th.passage_multiplier);
  } catch (const StatsError& e) {
    rep.inconclusive = e.what();
    return rep;
  }
  auto verdict = [](bool ok) { return ok ? Verdict::pass : Verdict::fail; };
  rep.inside_fraction = inside_fraction(rep.return_acf, th.acf_lag_lo, th.acf_lag_hi);
  for (const auto& s : rep.suite) rep.suite_above.emplace_back(s.transform, above_fraction(s.acf, 1, th.clustering_lag_hi));
  rep.above_fraction = rep.suite_above.front().second;  // |r|
  rep.heavy_tails = verdict(rep.excess_kurtosis > th.min_excess_kurtosis);
  rep.no_autocorrelation = verdict(rep.inside_fraction >= th.min_inside_fraction);
  rep.volatility_clustering = verdict(rep.above_fraction >= th.min_above_fraction);
  rep.aggregational_gaussianity = verdict(rep.kurtosis_fine > rep.kurtosis_coarse);
  return rep;
}

std::string report_csv(const std::vector<std::pair<std::size_t, RunReport>>& reports, const FactThresholds& th) {
  std::string out = "asset,fact,statistic,value,threshold,verdict\n";
  auto row = [&](std::size_t asset, std::string_view fact, std::string_view stat, double value, std::string thr,
                 std::string_view verdict) {
    out += fmt::format("{},{},{},{:.6g},{},{}\n", asset, fact, stat, value, thr, verdict);
  };
  for (const auto& [asset, r] : reports) {
    if (r.inconclusive) {
      out += fmt::format("{},all,points,{},{},inconclusive\n", asset, r.points, th.min_points);
      continue;
    }
    row(asset, "a", "excess_kurtosis", r.excess_kurtosis, fmt::format(">{}", th.min_excess_kurtosis),
        to_string(r.heavy_tails));
    row(asset, "b", fmt::format("acf_inside_band_lags_{}_{}", th.acf_lag_lo, th.acf_lag_hi), r.inside_fraction,
        fmt::format(">={}", th.min_inside_fraction), to_string(r.no_autocorrelation));
    row(asset, "c", fmt::format("abs_acf_above_band_lags_1_{}", th.clustering_lag_hi), r.above_fraction,
        fmt::format(">={}", th.min_above_fraction), to_string(r.volatility_clustering));
    for (const auto& [t, frac] : r.suite_above)
      row(asset, "d", fmt::format("{}_acf_above_band_lags_1_{}", to_string(t), th.clustering_lag_hi), frac, "-",
          "descriptive");
    const PassageSummary g = summarize(r.passage.gain, r.passage.gain_censored);
    const PassageSummary l = summarize(r.passage.loss, r.passage.loss_censored);
    row(asset, "e", "rho", r.passage.rho, "-", "descriptive");
    row(asset, "e", "gain_mean_ticks", g.mean, "-", "descriptive");
    row(asset, "e", "gain_median_ticks", g.median, "-", "descriptive");
    row(asset, "e", "gain_censored_fraction", g.censored_fraction, "-", "descriptive");
    row(asset, "e", "loss_mean_ticks", l.mean, "-", "descriptive");
    row(asset, "e", "loss_median_ticks", l.median, "-", "descriptive");
    row(asset, "e", "loss_censored_fraction", l.censored_fraction, "-", "descriptive");
    row(asset, "f", "kurtosis_stride_1", r.kurtosis_fine, "-", "descriptive");
    row(asset, "f", fmt::format("kurtosis_stride_{}", th.coarse_stride), r.kurtosis_coarse, "<stride_1",
        to_string(r.aggregational_gaussianity));
    out += fmt::format("{},all,passed,{},-,{}\n", asset, r.passed() ? 1 : 0, r.passed() ? "pass" : "fail");
  }
  return out;
}

}  // namespace cdasim::stats
