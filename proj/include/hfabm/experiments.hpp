#pragma once

#include "hfabm/analytics.hpp"
#include "hfabm/config.hpp"
#include "hfabm/market_engine.hpp"

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hfabm::experiments {

enum class Role : std::uint8_t { Baseline, OnlyLft, Sweep, Custom };
std::string_view to_string(Role r) noexcept;
Role role_from_string(std::string_view s);

/// One configuration point of an experiment: the experiment's base config
/// with `overrides` (config text) applied.
struct Point {
  std::string label;
  std::string overrides;
  Role role = Role::Custom;
};

struct ExperimentSpec {
  std::string name;
  Config base;
  std::vector<Point> points;
  std::vector<std::uint64_t> seeds;
};

/// Registered names: baseline, only-lft, scenarios, gamma-sweep.
std::vector<std::string> experiment_names();
/// Builds a registered experiment; base.MC seeds are derived from
/// base.master_seed. Throws std::invalid_argument for an unknown name.
ExperimentSpec make_experiment(std::string_view name, const Config& base);
/// A single-point experiment running `config` as is.
ExperimentSpec single_point(const Config& config, std::vector<std::uint64_t> seeds, std::string label = "run");
/// Base config plus the point's overrides, validated.
Config resolve(const ExperimentSpec& spec, const Point& point);

inline constexpr std::array kSweepGammas{1, 5, 10, 15, 20};

/// Everything computed from one point's runs.
struct PointAnalysis {
  analytics::StatSummary summary;
  analytics::AcfBattery acf;
  std::optional<double> excess_kurtosis;
  analytics::ReturnDensity density;
  analytics::TailCurve tail;
  analytics::PhaseCurves spread;
  analytics::PhaseCurves hf_concentration;
  analytics::PhaseCurves lf_concentration;
  /// Labeled sessions per phase (normal, crash, recovery) over all runs.
  std::array<std::size_t, 3> phase_sessions{};
  /// Run shown in the price/spread figure: the first run with a flash crash,
  /// else run 0.
  std::size_t sample_run = 0;
};

/// Labels the runs in place and computes every statistic.
PointAnalysis analyze_point(std::vector<RunRecord>& runs, const Config& config);

/// Scalar statistics of one point, the input of the report tables and the
/// acceptance verdicts. Round-trips through summary.json.
struct PointStats {
  std::string label;
  Role role = Role::Custom;
  std::string config_text;
  int N_H = 0;
  Session gamma_H = 1;
  std::size_t runs = 0;

  stats::MeanSe sigma_p;
  stats::MeanSe crash_count;
  stats::MeanSe mean_duration;
  /// [source: submitted, executed][condition][volume kind]
  std::array<std::array<std::array<std::optional<stats::MeanSe>, 3>, 3>, 2> correlations{};

  std::vector<double> acf_returns;
  std::vector<double> acf_abs;
  std::vector<double> acf_squared;
  double acf_band = 0.0;
  std::optional<double> excess_kurtosis;
  std::optional<stats::TailFit> tail;

  /// Per phase (normal, crash, recovery) pooled sample sizes.
  std::array<std::size_t, 3> phase_sessions{};
  /// min over the pooled spread grid of CCDF_crash - CCDF_normal.
  std::optional<double> spread_margin_kernel;
  std::optional<double> spread_margin_empirical;
  /// [class: HF, LF][phase]
  std::array<std::array<std::optional<double>, 3>, 2> concentration_median{};
  /// sup |CCDF_recovery - CCDF_normal| of the HF sell concentration.
  std::optional<double> hf_recovery_sup_kernel;
  std::optional<double> hf_recovery_sup_empirical;
};

PointStats point_stats(const PointAnalysis& a, const Config& config, std::string label, Role role);
nlohmann::json to_json(const PointStats& p);
PointStats point_stats_from_json(const nlohmann::json& j);

struct ExperimentOptions {
  /// Parent directory for a timestamped experiment directory, or the exact
  /// directory when exact_dir is set.
  std::filesystem::path out = "results";
  bool exact_dir = false;
  unsigned threads = 1;
  bool write_runs = true;
  bool figures = true;
  /// Progress lines; null for silence.
  std::ostream* log = nullptr;
};

struct ExperimentResult {
  std::filesystem::path dir;
  std::vector<PointStats> points;
};

ExperimentResult run_experiment(const ExperimentSpec& spec, const ExperimentOptions& opts);

/// Writes the statistic tables, summary.json and (optionally) figures of one
/// analyzed point into `dir`.
void write_point(const std::filesystem::path& dir, const PointAnalysis& a, const PointStats& stats,
                 std::span<const RunRecord> runs, bool figures);

/// Regenerates the SVG figures of a point directory from its stats CSVs.
/// Returns the files written.
std::vector<std::filesystem::path> write_figures(const std::filesystem::path& point_dir);

/// Figures for every point of an experiment directory (or a single point directory).
std::vector<std::filesystem::path> figures_for(const std::filesystem::path& dir);

/// Loads the points of an experiment directory in registry order.
std::vector<PointStats> load_points(const std::filesystem::path& dir);

/// Prints the volatility/crash, correlation and sweep tables and the verdicts
/// that the points allow.
/// Returns 0 when every verdict passes, 1 otherwise.
int report(const std::filesystem::path& dir, std::ostream& out);

}  // namespace hfabm::experiments
