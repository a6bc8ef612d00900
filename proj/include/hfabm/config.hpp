#pragma once

#include "hfabm/hf_agents.hpp"
#include "hfabm/lf_agents.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hfabm {

/// Model, analysis and batch parameters. Defaults are the baseline scenario.
struct Config {
  // Monte Carlo and horizon
  int MC = 50;
  Session T = 1200;
  int N_L = 10000;
  int N_H = 100;

  // Low-frequency traders
  double theta = 20.0;
  double theta_min = 10.0;
  double theta_max = 40.0;
  double alpha_c = 0.04;
  double sigma_c = 0.05;
  double alpha_f = 0.04;
  double sigma_f = 0.01;
  double sigma_y = 0.01;
  double delta = 0.0001;
  double sigma_z = 0.01;
  double zeta = 1.0;
  Session gamma_L = 20;

  // High-frequency traders
  Session gamma_H = 1;
  double eta_min = 0.0;
  double eta_max = 0.2;
  double lambda = 0.625;
  double kappa_min = 0.0;
  double kappa_max = 0.01;

  // Market mechanics
  double initial_price = 100.0;
  double tick_size = 0.01;
  double demand_scale = 100.0;
  Volume position_cap = 3000;
  double book_fraction_cap = 0.25;
  /// 1: LF orders are matched before HF traders quote and each HF order
  /// executes on arrival. 0: a single batch match after all submissions.
  int hf_sequential_execution = 1;

  // Flash-crash detection
  double crash_threshold = 0.05;
  Session recovery_window = 30;
  Session reference_window = 30;

  std::uint64_t master_seed = 20130506;

  LFParams lf_params() const;
  HFParams hf_params() const;

  friend bool operator==(const Config&, const Config&) = default;
};

/// Raised by parse_config / validate with every problem found, one per line in what().
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Bound violations, empty when the config is usable.
std::vector<std::string> validation_errors(const Config& c);
void validate(const Config& c);

/// Flat `key = value` text, `#` starts a comment. Absent keys keep their
/// defaults; unknown keys, malformed values and bound violations are all
/// reported together.
Config parse_config(std::string_view text);
/// Applies overrides on top of `base` without validating.
void apply_overrides(Config& base, std::string_view text);
Config load_config(const std::string& path);

/// Canonical text form; parse_config(format_config(c)) == c.
std::string format_config(const Config& c);

/// Returns true if `key` names a Config field.
bool is_config_key(std::string_view key);
/// Sets a single field from its textual value. Throws ConfigError.
void set_config_value(Config& c, std::string_view key, std::string_view value);

}  // namespace hfabm
