#pragma once

#include "hfabm/config.hpp"
#include "hfabm/market_engine.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hfabm::io {

/// Shortest text that parses back to the same double.
std::string format_number(double v);

/// Column order of the per-run CSV.
inline constexpr std::string_view kRunColumns =
    "session,close,fundamental,spread_pre_match,spread_end,lf_buy_vol,lf_sell_vol,hf_buy_vol,hf_sell_vol,"
    "lf_exec_vol,hf_exec_vol,n_trades";

std::string run_csv(const RunRecord& run);
void write_run_csv(const std::filesystem::path& path, const RunRecord& run);
/// Parses the per-run CSV; seed and scenario are left empty. Throws
/// std::runtime_error naming the file and line on malformed input.
std::vector<SessionRecord> read_run_csv(const std::filesystem::path& path);

/// Config (canonical text and key/value object), seed, scenario and the
/// population summary of one run.
nlohmann::json run_sidecar(const RunRecord& run, const Config& config);
void write_run_sidecar(const std::filesystem::path& path, const RunRecord& run, const Config& config);

/// A CSV table with a header row. Cells are stored as text.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;  // throws if absent
  double number(std::size_t row, std::string_view name) const;
  std::optional<double> maybe_number(std::size_t row, std::string_view name) const;
  const std::string& text(std::size_t row, std::string_view name) const;
};

std::string to_csv(const Table& t);
Table parse_csv(std::string_view text);
Table read_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

std::string optional_cell(const std::optional<double>& v);

}  // namespace hfabm::io
