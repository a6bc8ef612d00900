#include "hfabm/io.hpp"

#include <nlohmann/json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hfabm::io {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // also folds -0
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string optional_cell(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

std::string run_csv(const RunRecord& run) {
  std::string out(kRunColumns);
  out += '\n';
  for (const auto& s : run.sessions) {
    out += std::to_string(s.session);
    for (const std::string& cell :
         {format_number(s.close), format_number(s.fundamental), optional_cell(s.spread_pre_match),
          optional_cell(s.spread_end), std::to_string(s.lf_buy_vol), std::to_string(s.lf_sell_vol),
          std::to_string(s.hf_buy_vol), std::to_string(s.hf_sell_vol), std::to_string(s.lf_exec_vol),
          std::to_string(s.hf_exec_vol), std::to_string(s.n_trades)}) {
      out += ',';
      out += cell;
    }
    out += '\n';
  }
  return out;
}

void write_text(const std::filesystem::path& path, std::string_view text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  f.flush();
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_run_csv(const std::filesystem::path& path, const RunRecord& run) { write_text(path, run_csv(run)); }

namespace {

std::vector<std::string> split(std::string_view line, char sep = ',') {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    cells.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

std::int64_t parse_int(const std::string& s) {
  std::int64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::optional<double> parse_optional(const std::string& s) {
  if (s.empty()) return std::nullopt;
  return parse_double(s);
}

}  // namespace

std::vector<SessionRecord> read_run_csv(const std::filesystem::path& path) {
  const Table t = read_csv(path);
  std::string expected(kRunColumns);
  std::string got;
  for (std::size_t i = 0; i < t.header.size(); ++i) got += (i ? "," : "") + t.header[i];
  if (got != expected) throw std::runtime_error(path.string() + ": unexpected header");

  std::vector<SessionRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& c = t.rows[r];
    try {
      if (c.size() != 12) throw std::invalid_argument("expected 12 columns");
      SessionRecord s;
      s.session = parse_int(c[0]);
      s.close = parse_double(c[1]);
      s.fundamental = parse_double(c[2]);
      s.spread_pre_match = parse_optional(c[3]);
      s.spread_end = parse_optional(c[4]);
      s.lf_buy_vol = parse_int(c[5]);
      s.lf_sell_vol = parse_int(c[6]);
      s.hf_buy_vol = parse_int(c[7]);
      s.hf_sell_vol = parse_int(c[8]);
      s.lf_exec_vol = parse_int(c[9]);
      s.hf_exec_vol = parse_int(c[10]);
      s.n_trades = parse_int(c[11]);
      out.push_back(std::move(s));
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error(path.string() + ":" + std::to_string(r + 2) + ": " + e.what());
    }
  }
  return out;
}

nlohmann::json run_sidecar(const RunRecord& run, const Config& config) {
  nlohmann::json cfg = nlohmann::json::object();
  const std::string text = format_config(config);
  std::istringstream lines(text);
  for (std::string line; std::getline(lines, line);) {
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) continue;
    cfg[line.substr(0, eq)] = parse_double(line.substr(eq + 3));
  }
  const AgentSummary& a = run.summary;
  return {
      {"seed", run.seed},
      {"scenario", run.scenario},
      {"sessions", run.sessions.size()},
      {"config", cfg},
      {"config_text", text},
      {"population",
       {{"theta_mean", a.theta_mean},
        {"theta_min", a.theta_min},
        {"theta_max", a.theta_max},
        {"delta_x_min", a.delta_x_min},
        {"delta_x_max", a.delta_x_max},
        {"final_chartist_share", a.final_chartist_share},
        {"max_abs_position", a.max_abs_position},
        {"hf_active_sessions", a.hf_active_sessions},
        {"lf_orders", a.lf_orders},
        {"hf_orders", a.hf_orders},
        {"hf_profit_count", a.hf_profit_count},
        {"hf_profit_mean", a.hf_profit_mean},
        {"hf_profit_sd", a.hf_profit_sd},
        {"hf_profit_skewness", a.hf_profit_skewness}}},
  };
}

void write_run_sidecar(const std::filesystem::path& path, const RunRecord& run, const Config& config) {
  write_text(path, run_sidecar(run, config).dump(2) + "\n");
}

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw std::runtime_error("table has no column '" + std::string(name) + "'");
}

const std::string& Table::text(std::size_t row, std::string_view name) const { return rows.at(row).at(column(name)); }

double Table::number(std::size_t row, std::string_view name) const {
  auto v = maybe_number(row, name);
  if (!v) throw std::runtime_error("empty cell in column '" + std::string(name) + "'");
  return *v;
}

std::optional<double> Table::maybe_number(std::size_t row, std::string_view name) const {
  return parse_optional(text(row, name));
}

std::string to_csv(const Table& t) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return out;
}

Table parse_csv(std::string_view text) {
  Table t;
  bool first = true;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    start = end + 1;
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
    } else {
      t.rows.push_back(split(line));
    }
  }
  return t;
}

Table read_csv(const std::filesystem::path& path) { return parse_csv(read_text(path)); }

}  // namespace hfabm::io
