#include "hfabm/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <variant>

namespace hfabm {

namespace {

using Field = std::variant<int Config::*, std::int64_t Config::*, std::uint64_t Config::*, double Config::*>;

struct FieldDef {
  std::string_view key;
  Field member;
};

// Canonical order for format_config.
constexpr FieldDef kFields[] = {
    {"MC", &Config::MC},
    {"T", &Config::T},
    {"N_L", &Config::N_L},
    {"N_H", &Config::N_H},
    {"theta", &Config::theta},
    {"theta_min", &Config::theta_min},
    {"theta_max", &Config::theta_max},
    {"alpha_c", &Config::alpha_c},
    {"sigma_c", &Config::sigma_c},
    {"alpha_f", &Config::alpha_f},
    {"sigma_f", &Config::sigma_f},
    {"sigma_y", &Config::sigma_y},
    {"delta", &Config::delta},
    {"sigma_z", &Config::sigma_z},
    {"zeta", &Config::zeta},
    {"gamma_L", &Config::gamma_L},
    {"gamma_H", &Config::gamma_H},
    {"eta_min", &Config::eta_min},
    {"eta_max", &Config::eta_max},
    {"lambda", &Config::lambda},
    {"kappa_min", &Config::kappa_min},
    {"kappa_max", &Config::kappa_max},
    {"initial_price", &Config::initial_price},
    {"tick_size", &Config::tick_size},
    {"demand_scale", &Config::demand_scale},
    {"position_cap", &Config::position_cap},
    {"book_fraction_cap", &Config::book_fraction_cap},
    {"hf_sequential_execution", &Config::hf_sequential_execution},
    {"crash_threshold", &Config::crash_threshold},
    {"recovery_window", &Config::recovery_window},
    {"reference_window", &Config::reference_window},
    {"master_seed", &Config::master_seed},
};

const FieldDef* find_field(std::string_view key) {
  for (const auto& f : kFields)
    if (f.key == key) return &f;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

// Integers also accept an exact decimal form such as "1e4" or "3000.0".
template <typename Int>
bool parse_integer(std::string_view text, Int& out) {
  if (parse_number(text, out)) return true;
  double d = 0.0;
  if (!parse_number(text, d) || !std::isfinite(d) || d != std::floor(d)) return false;
  if (d < static_cast<double>(std::numeric_limits<Int>::min()) ||
      d > static_cast<double>(std::numeric_limits<Int>::max()))
    return false;
  out = static_cast<Int>(d);
  return true;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void set_field(Config& c, const FieldDef& f, std::string_view value, std::vector<std::string>& problems) {
  std::visit(
      [&](auto member) {
        using T = std::remove_reference_t<decltype(c.*member)>;
        T parsed{};
        bool ok = false;
        if constexpr (std::is_floating_point_v<T>)
          ok = parse_number(value, parsed) && std::isfinite(parsed);
        else
          ok = parse_integer(value, parsed);
        if (!ok) {
          problems.push_back(std::string(f.key) + ": cannot parse '" + std::string(value) + "' as " +
                             (std::is_floating_point_v<T> ? "a number" : "an integer"));
          return;
        }
        c.*member = parsed;
      },
      f.member);
}

void apply_lines(Config& c, std::string_view text, std::vector<std::string>& problems) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected 'key = value'");
      continue;
    }
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const FieldDef* f = find_field(key);
    if (!f) {
      problems.push_back("line " + std::to_string(line_no) + ": unknown key '" + std::string(key) + "'");
      continue;
    }
    const std::size_t before = problems.size();
    set_field(c, *f, value, problems);
    for (std::size_t i = before; i < problems.size(); ++i)
      problems[i] = "line " + std::to_string(line_no) + ": " + problems[i];
  }
}

std::string join_lines(const std::vector<std::string>& problems) {
  std::string msg = "invalid configuration:";
  for (const auto& p : problems) msg += "\n  " + p;
  return msg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join_lines(problems)), problems_(std::move(problems)) {}

LFParams Config::lf_params() const {
  LFParams p;
  p.alpha_c = alpha_c;
  p.alpha_f = alpha_f;
  p.sigma_c = sigma_c;
  p.sigma_f = sigma_f;
  p.sigma_z = sigma_z;
  p.delta = delta;
  p.sigma_y = sigma_y;
  p.zeta = zeta;
  p.gamma_L = gamma_L;
  p.theta = theta;
  p.theta_min = theta_min;
  p.theta_max = theta_max;
  p.demand_scale = demand_scale;
  return p;
}

HFParams Config::hf_params() const {
  HFParams p;
  p.eta_min = eta_min;
  p.eta_max = eta_max;
  p.lambda = lambda;
  p.kappa_min = kappa_min;
  p.kappa_max = kappa_max;
  p.gamma_H = gamma_H;
  p.position_cap = position_cap;
  p.book_fraction_cap = book_fraction_cap;
  return p;
}

std::vector<std::string> validation_errors(const Config& c) {
  std::vector<std::string> e;
  auto require = [&](bool ok, std::string msg) {
    if (!ok) e.push_back(std::move(msg));
  };
  require(c.MC >= 1, "MC must be >= 1");
  require(c.T >= 1, "T must be >= 1");
  require(c.N_L >= 1, "N_L must be >= 1");
  require(c.N_H >= 0, "N_H must be >= 0");
  require(c.theta > 0.0, "theta must be > 0");
  require(c.theta_min > 0.0, "theta_min must be > 0");
  require(c.theta_min < c.theta_max, "theta_max must be > theta_min");
  require(c.alpha_c > 0.0 && c.alpha_c < 1.0, "alpha_c must lie in (0, 1)");
  require(c.alpha_f > 0.0 && c.alpha_f < 1.0, "alpha_f must lie in (0, 1)");
  require(c.sigma_c >= 0.0, "sigma_c must be >= 0");
  require(c.sigma_f >= 0.0, "sigma_f must be >= 0");
  require(c.sigma_y >= 0.0, "sigma_y must be >= 0");
  require(c.sigma_z >= 0.0, "sigma_z must be >= 0");
  require(c.delta >= 0.0, "delta must be >= 0");
  require(c.zeta > 0.0, "zeta must be > 0");
  require(c.gamma_L >= 1, "gamma_L must be >= 1");
  require(c.gamma_H >= 1, "gamma_H must be >= 1");
  require(c.eta_min >= 0.0, "eta_min must be >= 0");
  require(c.eta_min < c.eta_max, "eta_max must be > eta_min");
  require(c.lambda > 0.0 && c.lambda < 1.0, "lambda must lie in (0, 1)");
  require(c.kappa_min >= 0.0, "kappa_min must be >= 0");
  require(c.kappa_min < c.kappa_max, "kappa_max must be > kappa_min");
  require(c.kappa_max < 1.0, "kappa_max must be < 1");
  require(c.initial_price > 0.0, "initial_price must be > 0");
  require(c.tick_size > 0.0, "tick_size must be > 0");
  require(c.demand_scale > 0.0, "demand_scale must be > 0");
  require(c.position_cap >= 1, "position_cap must be >= 1");
  require(c.book_fraction_cap > 0.0 && c.book_fraction_cap <= 1.0, "book_fraction_cap must lie in (0, 1]");
  require(c.hf_sequential_execution == 0 || c.hf_sequential_execution == 1, "hf_sequential_execution must be 0 or 1");
  require(c.crash_threshold > 0.0 && c.crash_threshold < 1.0, "crash_threshold must lie in (0, 1)");
  require(c.recovery_window >= 1, "recovery_window must be >= 1");
  require(c.reference_window >= 1, "reference_window must be >= 1");
  return e;
}

void validate(const Config& c) {
  if (auto e = validation_errors(c); !e.empty()) throw ConfigError(std::move(e));
}

void apply_overrides(Config& base, std::string_view text) {
  std::vector<std::string> problems;
  apply_lines(base, text, problems);
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

Config parse_config(std::string_view text) {
  Config c;
  std::vector<std::string> problems;
  apply_lines(c, text, problems);
  for (auto& p : validation_errors(c)) problems.push_back(std::move(p));
  if (!problems.empty()) throw ConfigError(std::move(problems));
  return c;
}

Config load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"cannot open config file " + path});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const Config& c) {
  std::string out;
  for (const auto& f : kFields) {
    out += f.key;
    out += " = ";
    std::visit(
        [&](auto member) {
          const auto v = c.*member;
          if constexpr (std::is_floating_point_v<decltype(v)>)
            out += format_double(v);
          else
            out += std::to_string(v);
        },
        f.member);
    out += '\n';
  }
  return out;
}

bool is_config_key(std::string_view key) { return find_field(key) != nullptr; }

void set_config_value(Config& c, std::string_view key, std::string_view value) {
  std::vector<std::string> problems;
  if (const FieldDef* f = find_field(key))
    set_field(c, *f, trim(value), problems);
  else
    problems.push_back("unknown key '" + std::string(key) + "'");
  if (!problems.empty()) throw ConfigError(std::move(problems));
}

}  // namespace hfabm
