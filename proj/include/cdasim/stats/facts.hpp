#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cdasim::stats {

// Zero variance, non-positive prices, too-short series.
class StatsError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ReturnSeries {
  std::vector<double> values;  // ln p[t] - ln p[t - stride] over the subsampled path
  std::size_t stride = 1;
};

ReturnSeries log_returns(std::span<const double> prices, std::size_t stride = 1);

struct AcfResult {
  std::vector<double> correlation;  // correlation[k - 1] is lag k
  double band = 0.0;                // 1.96 / sqrt(n)

  std::size_t max_lag() const { return correlation.size(); }
  double at(std::size_t lag) const { return correlation.at(lag - 1); }
};

// Sample autocorrelation normalized by the overall mean and variance.
// acf() splits the lags across OpenMP threads; acf_serial() is the reference
// loop. Both sum in the same order, so results are bitwise identical.
AcfResult acf(std::span<const double> x, std::size_t max_lag);
AcfResult acf_serial(std::span<const double> x, std::size_t max_lag);

// Population m4 / m2^2 - 3.
double excess_kurtosis(std::span<const double> x);

enum class Transform { abs, square, abs_square, cosine, log1p_square };
inline constexpr std::array<Transform, 5> kTransforms{Transform::abs, Transform::square, Transform::abs_square,
                                                      Transform::cosine, Transform::log1p_square};
std::string_view to_string(Transform t);
double apply(Transform t, double r);

struct TransformAcf {
  Transform transform;
  AcfResult acf;
};
std::vector<TransformAcf> nonlinear_acf_suite(std::span<const double> returns, std::size_t max_lag);

struct FirstPassage {
  double rho = 0.0;
  std::vector<std::size_t> gain;  // ticks from each start until the log return first reaches +rho
  std::vector<std::size_t> loss;  // same for -rho; gain and loss are scanned independently
  std::size_t gain_censored = 0;  // starts that never reach the level
  std::size_t loss_censored = 0;
};

// rho = multiplier * population std of the one-tick log returns.
// first_passage_times() prunes censored starts with suffix extrema and runs
// starts in parallel; first_passage_serial() scans every path to the end.
FirstPassage first_passage_times(std::span<const double> prices, double multiplier);
FirstPassage first_passage_serial(std::span<const double> prices, double multiplier);

struct PassageSummary {
  std::size_t count = 0;
  std::size_t censored = 0;
  double censored_fraction = 0.0;
  double mean = 0.0;
  double median = 0.0;
};
PassageSummary summarize(const std::vector<std::size_t>& times, std::size_t censored);

struct FactThresholds {
  std::size_t min_points = 2000;
  double min_excess_kurtosis = 0.5;
  std::size_t acf_lag_lo = 2;
  std::size_t acf_lag_hi = 50;
  double min_inside_fraction = 0.90;
  std::size_t clustering_lag_hi = 20;
  double min_above_fraction = 0.60;
  std::size_t coarse_stride = 5;
  double passage_multiplier = 5.0;
};

enum class Verdict { pass, fail, inconclusive };
std::string_view to_string(Verdict v);

struct RunReport {
  std::size_t points = 0;
  std::optional<std::string> inconclusive;  // reason, when the series cannot be judged

  double excess_kurtosis = 0.0;                             // (a)
  double inside_fraction = 0.0;                             // (b)
  double above_fraction = 0.0;                              // (c)/(d), on |r|
  std::vector<std::pair<Transform, double>> suite_above;    // (d), every transform, descriptive
  double kurtosis_fine = 0.0;                               // (f), stride 1
  double kurtosis_coarse = 0.0;                             // (f), coarse stride
  Verdict heavy_tails = Verdict::inconclusive;
  Verdict no_autocorrelation = Verdict::inconclusive;
  Verdict volatility_clustering = Verdict::inconclusive;
  Verdict aggregational_gaussianity = Verdict::inconclusive;

  AcfResult return_acf;
  std::vector<TransformAcf> suite;
  std::vector<double> returns;
  std::vector<double> coarse_returns;
  FirstPassage passage;

  bool passed() const;
};

RunReport validate_run(std::span<const double> prices, const FactThresholds& th = {});

// Fraction of lags in [lo, hi] with |acf| inside the band / acf above the band.
double inside_fraction(const AcfResult& r, std::size_t lo, std::size_t hi);
double above_fraction(const AcfResult& r, std::size_t lo, std::size_t hi);

// `fact,statistic,value,threshold,verdict` rows, one report per asset.
std::string report_csv(const std::vector<std::pair<std::size_t, RunReport>>& reports, const FactThresholds& th);

}  // namespace cdasim::stats
