#include "cdasim/sim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <fmt/format.h>

namespace cdasim::sim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_int(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || ec != std::errc{} || p != v.data() + v.size())
    throw ConfigError(key, "expected a non-negative integer, got '" + v + "'");
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double out = 0;
  try {
    out = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (v.empty() || used != v.size() || !std::isfinite(out)) throw ConfigError(key, "expected a number, got '" + v + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes") return true;
  if (v == "0" || v == "false" || v == "no") return false;
  throw ConfigError(key, "expected true/false, got '" + v + "'");
}

using Setter = std::function<void(ScenarioConfig&, const std::string& key, const std::string& value)>;

template <class T>
Setter int_field(T ScenarioConfig::*m) {
  return [m](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*m = parse_int<T>(k, v); };
}
Setter real_field(double ScenarioConfig::*m) {
  return [m](ScenarioConfig& c, const std::string& k, const std::string& v) { c.*m = parse_real(k, v); };
}

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"name", [](ScenarioConfig& c, const std::string&, const std::string& v) { c.name = v; }},
      {"n_lt", int_field(&ScenarioConfig::n_lt)},
      {"n_lp", int_field(&ScenarioConfig::n_lp)},
      {"n_mm", int_field(&ScenarioConfig::n_mm)},
      {"n_ia", int_field(&ScenarioConfig::n_ia)},
      {"cash_min", real_field(&ScenarioConfig::cash_min)},
      {"cash_max", real_field(&ScenarioConfig::cash_max)},
      {"shares_min", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.shares_min = parse_int<Quantity>(k, v); }},
      {"shares_max", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.shares_max = parse_int<Quantity>(k, v); }},
      {"freq_lt", real_field(&ScenarioConfig::freq_lt)},
      {"freq_lp", real_field(&ScenarioConfig::freq_lp)},
      {"freq_mm", real_field(&ScenarioConfig::freq_mm)},
      {"freq_ia", real_field(&ScenarioConfig::freq_ia)},
      {"assets", int_field(&ScenarioConfig::assets)},
      {"t_close", real_field(&ScenarioConfig::t_close)},
      {"mid_min", real_field(&ScenarioConfig::mid_min)},
      {"mid_max", real_field(&ScenarioConfig::mid_max)},
      {"seed", int_field(&ScenarioConfig::seed)},
      {"accel", real_field(&ScenarioConfig::accel)},
      {"ladder_levels", int_field(&ScenarioConfig::ladder_levels)},
      {"ladder_qty", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ladder_qty = parse_int<Quantity>(k, v); }},
      {"balance_cash", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.balance_cash = parse_bool(k, v); }},
      {"lp_window", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.lp.window = parse_int<std::size_t>(k, v); }},
      {"lp_sigma_fallback", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.lp.sigma_fallback = parse_real(k, v); }},
      {"mm_order_size", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.mm.order_size = parse_int<Quantity>(k, v); }},
      {"mm_eps_min", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.mm.eps_min = parse_real(k, v); }},
      {"mm_eps_max", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.mm.eps_max = parse_real(k, v); }},
      {"ia_target_share", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ia.target_share = parse_real(k, v); }},
      {"ia_tolerance", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ia.tolerance = parse_real(k, v); }},
      {"ia_risk_aversion", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ia.risk_aversion = parse_real(k, v); }},
      {"ia_inventory_limit", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ia.inventory_limit = parse_int<Quantity>(k, v); }},
      {"ia_order_size", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ia.order_size = parse_int<Quantity>(k, v); }},
      {"ia_watchdog", [](ScenarioConfig& c, const std::string& k, const std::string& v) { c.ia.watchdog = parse_real(k, v); }},
  };
  return table;
}

}  // namespace

void ScenarioConfig::validate() const {
  if (cash_min < 0) throw ConfigError("cash_min", "must be >= 0");
  if (cash_max < cash_min) throw ConfigError("cash_max", "must be >= cash_min");
  if (shares_min < 0) throw ConfigError("shares_min", "must be >= 0");
  if (shares_max < shares_min) throw ConfigError("shares_max", "must be >= shares_min");
  const std::pair<const char*, double> freqs[] = {
      {"freq_lt", freq_lt}, {"freq_lp", freq_lp}, {"freq_mm", freq_mm}, {"freq_ia", freq_ia}};
  for (const auto& [field, f] : freqs)
    if (!(f >= 1.0)) throw ConfigError(field, "must be >= 1 second");
  if (assets == 0) throw ConfigError("assets", "must be >= 1");
  if (!(t_close > 0)) throw ConfigError("t_close", "must be > 0");
  if (!(mid_min > 0)) throw ConfigError("mid_min", "must be > 0");
  if (mid_max < mid_min) throw ConfigError("mid_max", "must be >= mid_min");
  if (!(accel > 0)) throw ConfigError("accel", "must be > 0");
  if (ladder_qty < 0) throw ConfigError("ladder_qty", "must be >= 0");
  if (ladder_levels > 0 && mid_min <= 0.01 * static_cast<double>(ladder_levels + 1))
    throw ConfigError("mid_min", "too low for the initial ladder");
  if (lp.window < 2) throw ConfigError("lp_window", "must be >= 2");
  if (!(lp.sigma_fallback > 0)) throw ConfigError("lp_sigma_fallback", "must be > 0");
  if (mm.order_size < 1) throw ConfigError("mm_order_size", "must be >= 1");
  if (mm.eps_max < mm.eps_min) throw ConfigError("mm_eps_max", "must be >= mm_eps_min");
  if (n_ia > 0) {
    try {
      ia::IaConfig c = ia;
      c.t_freq = freq_ia;
      c.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("ia_") + e.what(), "invalid");
    }
  }
}

std::optional<ScenarioConfig> preset(const std::string& name) {
  ScenarioConfig c;
  c.name = name;
  if (name == "small-univariate") {
    c.n_lt = 70, c.n_lp = 70, c.n_mm = 1, c.n_ia = 1;
    c.cash_min = 5000, c.cash_max = 15000;
    c.shares_min = 50, c.shares_max = 150;
    c.freq_lt = 5, c.freq_lp = 10, c.freq_mm = 2, c.freq_ia = 2;
    c.assets = 1;
  } else if (name == "medium-multivariate" || name == "medium-reduced") {
    const bool reduced = name == "medium-reduced";
    c.n_lt = reduced ? 65 : 650, c.n_lp = reduced ? 585 : 5850, c.n_mm = reduced ? 20 : 200, c.n_ia = 0;
    c.cash_min = 25000, c.cash_max = 75000;
    c.shares_min = 50, c.shares_max = 150;
    c.freq_lt = 720, c.freq_lp = 720, c.freq_mm = 2, c.freq_ia = 2;
    c.assets = 5;
  } else if (name == "large-multivariate") {
    c.n_lt = 8000, c.n_lp = 100000, c.n_mm = 500, c.n_ia = 0;
    c.cash_min = 150000, c.cash_max = 450000;
    c.shares_min = 50, c.shares_max = 150;
    c.freq_lt = 7200, c.freq_lp = 7200, c.freq_mm = 2, c.freq_ia = 2;
    c.assets = 30;
  } else {
    return std::nullopt;
  }
  c.ia.t_freq = c.freq_ia;
  return c;
}

ScenarioConfig parse_scenario(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(t, fmt::format("line {} is not key = value", line_no));
    entries.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  ScenarioConfig cfg;
  for (const auto& [k, v] : entries) {
    if (k != "preset") continue;
    auto p = preset(v);
    if (!p) throw ConfigError("preset", "unknown preset '" + v + "'");
    cfg = *p;
  }
  for (const auto& [k, v] : entries) {
    if (k == "preset") continue;
    auto it = setters().find(k);
    if (it == setters().end()) throw ConfigError(k, "unknown key");
    it->second(cfg, k, v);
  }
  cfg.ia.t_freq = cfg.freq_ia;
  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& file_or_preset) {
  if (auto p = preset(file_or_preset)) return *p;
  std::ifstream f(file_or_preset);
  if (!f) throw ConfigError("scenario", "no preset or readable file named '" + file_or_preset + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_scenario(ss.str());
}

std::string to_text(const ScenarioConfig& c) {
  auto num = [](double v) { return fmt::format("{}", v); };
  std::string out;
  auto kv = [&](std::string_view k, const std::string& v) { out += fmt::format("{} = {}\n", k, v); };
  kv("name", c.name);
  kv("n_lt", std::to_string(c.n_lt));
  kv("n_lp", std::to_string(c.n_lp));
  kv("n_mm", std::to_string(c.n_mm));
  kv("n_ia", std::to_string(c.n_ia));
  kv("cash_min", num(c.cash_min));
  kv("cash_max", num(c.cash_max));
  kv("shares_min", std::to_string(c.shares_min));
  kv("shares_max", std::to_string(c.shares_max));
  kv("freq_lt", num(c.freq_lt));
  kv("freq_lp", num(c.freq_lp));
  kv("freq_mm", num(c.freq_mm));
  kv("freq_ia", num(c.freq_ia));
  kv("assets", std::to_string(c.assets));
  kv("t_close", num(c.t_close));
  kv("mid_min", num(c.mid_min));
  kv("mid_max", num(c.mid_max));
  kv("seed", std::to_string(c.seed));
  kv("accel", num(c.accel));
  kv("ladder_levels", std::to_string(c.ladder_levels));
  kv("ladder_qty", std::to_string(c.ladder_qty));
  kv("balance_cash", c.balance_cash ? "true" : "false");
  kv("lp_window", std::to_string(c.lp.window));
  kv("lp_sigma_fallback", num(c.lp.sigma_fallback));
  kv("mm_order_size", std::to_string(c.mm.order_size));
  kv("mm_eps_min", num(c.mm.eps_min));
  kv("mm_eps_max", num(c.mm.eps_max));
  kv("ia_target_share", num(c.ia.target_share));
  kv("ia_tolerance", num(c.ia.tolerance));
  kv("ia_risk_aversion", num(c.ia.risk_aversion));
  kv("ia_inventory_limit", std::to_string(c.ia.inventory_limit));
  kv("ia_order_size", std::to_string(c.ia.order_size));
  kv("ia_watchdog", num(c.ia.watchdog));
  return out;
}

}  // namespace cdasim::sim
