#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "cdasim/agents/actors.hpp"
#include "cdasim/ia/policy.hpp"
#include "cdasim/market/types.hpp"

namespace cdasim::sim {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct ScenarioConfig {
  std::string name = "custom";
  std::size_t n_lt = 0;
  std::size_t n_lp = 0;
  std::size_t n_mm = 0;
  std::size_t n_ia = 0;
  double cash_min = 0.0;  // currency units
  double cash_max = 0.0;
  Quantity shares_min = 0;  // per asset
  Quantity shares_max = 0;
  double freq_lt = 1.0;  // mean seconds between activations
  double freq_lp = 1.0;
  double freq_mm = 1.0;
  double freq_ia = 1.0;
  std::size_t assets = 1;
  double t_close = 3600.0;  // simulated seconds
  double mid_min = 85.0;
  double mid_max = 115.0;
  std::uint64_t seed = 1;
  double accel = 1.0;  // simulated seconds per wall second in realtime mode

  // initial book: `ladder_levels` per side, one tick apart, `ladder_qty` each
  std::size_t ladder_levels = 5;
  Quantity ladder_qty = 100;
  // scale the cash draws so total cash equals total initial share value
  bool balance_cash = true;

  agents::LpParams lp;
  agents::MmParams mm;
  ia::IaConfig ia;

  std::size_t agent_count() const { return n_lt + n_lp + n_mm + n_ia; }
  void validate() const;  // throws ConfigError naming the first bad field
};

// small-univariate, medium-multivariate, large-multivariate, and
// medium-reduced (the desk-scale stand-in for medium).
std::optional<ScenarioConfig> preset(const std::string& name);

// Flat `key = value` text; `#` starts a comment. A `preset` key seeds every
// field from that preset before the remaining keys apply.
ScenarioConfig parse_scenario(const std::string& text);

// A preset name or a path to a config file.
ScenarioConfig load_scenario(const std::string& file_or_preset);

// Round-trips through parse_scenario.
std::string to_text(const ScenarioConfig& cfg);

}  // namespace cdasim::sim
