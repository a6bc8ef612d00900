#pragma once

#include "hfabm/market_engine.hpp"
#include "hfabm/stats.hpp"

#include <array>
#include <optional>
#include <span>
#include <vector>

namespace hfabm::analytics {

struct CrashParams {
  double threshold = 0.05;
  Session recovery_window = 30;
  Session reference_window = 30;

  static CrashParams from(const Config& c) { return {c.crash_threshold, c.recovery_window, c.reference_window}; }
};

struct FlashCrashEvent {
  Session onset = 0;
  Session trough = 0;
  Session recovery = 0;
  /// (reference - trough close) / reference
  double depth = 0.0;
  /// recovery - onset
  Session duration = 0;
  double reference = 0.0;
};

struct CrashScan {
  std::vector<FlashCrashEvent> events;
  std::vector<Phase> labels;  // one per session
};

/// Onset: first session whose close is at or below (1 - threshold) times the
/// maximum close of the preceding reference_window sessions. Recovery: first
/// later session that regains that reference. Episodes recovering within
/// recovery_window sessions are labeled Crash from onset to trough and
/// Recovery after it; scanning resumes after the recovery. Slower episodes
/// are dropped and scanning resumes at the next session.
CrashScan detect_flash_crashes(std::span<const double> closes, const CrashParams& p = {});

/// Writes the scan's labels into the run's session records.
CrashScan label_run(RunRecord& run, const CrashParams& p);

enum class Condition : std::uint8_t { Unconditional, FlashCrashes, NormalTimes };
enum class VolumeKind : std::uint8_t { Total, HF, LF };
enum class VolumeSource : std::uint8_t { Submitted, Executed };

inline constexpr std::array kConditions{Condition::Unconditional, Condition::FlashCrashes, Condition::NormalTimes};
inline constexpr std::array kVolumeKinds{VolumeKind::Total, VolumeKind::HF, VolumeKind::LF};

std::string_view to_string(Condition c) noexcept;
std::string_view to_string(VolumeKind v) noexcept;
std::string_view to_string(VolumeSource v) noexcept;

/// Correlations of one run; absent when the phase has fewer than three
/// sessions or a series is constant.
struct RunCorrelations {
  std::array<std::array<std::optional<double>, 3>, 3> cell{};  // [condition][volume kind]
};

/// Session t's log return against session t's volume, t >= 1, using the
/// labels stored in the run.
RunCorrelations run_correlations(const RunRecord& run, VolumeSource source);

struct CorrelationTable {
  VolumeSource source = VolumeSource::Submitted;
  std::array<std::array<std::optional<stats::MeanSe>, 3>, 3> cell{};
  std::vector<RunCorrelations> per_run;
};

/// Cross-run mean and Monte-Carlo standard error of each cell over the runs where it exists.
CorrelationTable conditional_correlations(std::span<const RunRecord> runs, VolumeSource source);

struct PhaseCurves {
  std::vector<double> grid;
  /// Indexed by Phase (NormalTimes, Crash, Recovery -> 0, 1, 2). Empty when
  /// the phase has no samples.
  std::array<std::vector<double>, 3> kernel;
  std::array<std::vector<double>, 3> empirical;
  std::array<std::vector<double>, 3> density;
  std::array<std::vector<double>, 3> samples;
};

std::size_t phase_index(Phase p);
inline constexpr std::array kPhases{Phase::NormalTimes, Phase::Crash, Phase::Recovery};

/// Pooled end-of-session spreads per phase; grid spans the pooled range.
PhaseCurves spread_distribution_by_phase(std::span<const RunRecord> runs, std::size_t grid_points = 201);

/// Sell volume / total submitted volume of the class in one session; absent
/// when the class submitted nothing.
std::optional<double> sell_concentration(const SessionRecord& s, TraderClass cls) noexcept;

/// Pooled per-phase concentration ratios on a [0, 1] grid.
PhaseCurves sell_concentration_ratio(std::span<const RunRecord> runs, TraderClass cls, std::size_t grid_points = 101);

struct RunStats {
  std::uint64_t seed = 0;
  double sigma_p = 0.0;
  std::size_t n_crashes = 0;
  /// Mean duration of the run's crashes; absent without crashes.
  std::optional<double> mean_duration;
  std::vector<FlashCrashEvent> crashes;
};

struct StatSummary {
  std::size_t runs = 0;
  stats::MeanSe sigma_p;
  stats::MeanSe crash_count;
  /// Over runs with at least one crash.
  stats::MeanSe mean_duration;
  CorrelationTable correlations;
  CorrelationTable correlations_executed;
  std::optional<stats::ReturnTail> tail;
  std::vector<RunStats> per_run;
};

/// sigma_P of one run: sample standard deviation of its log returns.
double volatility(std::span<const double> returns);

/// Labels every run (in place) and computes the volatility, crash, correlation
/// and pooled tail statistics.
StatSummary summarize(std::span<RunRecord> runs, const CrashParams& p);

/// Log returns of every run, concatenated in run order.
std::vector<double> pooled_returns(std::span<const RunRecord> runs);

struct AcfRun {
  std::vector<double> returns;
  std::vector<double> abs;
  std::vector<double> squared;
};

/// Per-run autocorrelations of r, |r| and r^2 at lags 1..max_lag and their
/// cross-run means.
struct AcfBattery {
  std::size_t max_lag = 0;
  /// 2.58 / sqrt(n) for the shortest run.
  double band = 0.0;
  std::vector<AcfRun> per_run;
  AcfRun mean;

  /// Lags whose mean return autocorrelation lies inside the band.
  std::size_t inside_band() const;
};

AcfBattery acf_battery(std::span<const RunRecord> runs, std::size_t max_lag = 20);

/// Kernel density of pooled returns next to the Normal density with the same
/// mean and standard deviation.
struct ReturnDensity {
  std::vector<double> grid;
  std::vector<double> kernel;
  std::vector<double> normal;
  double mean = 0.0;
  double sd = 0.0;
};

ReturnDensity return_density(std::span<const double> returns, std::size_t grid_points = 201);

/// Empirical P(X >= x) of negative-return magnitudes with the fitted power law
/// (n_tail / n) * (x / x_min)^-alpha over the tail. At most max_points points.
struct TailCurve {
  std::vector<double> x;
  std::vector<double> empirical;
  std::vector<double> fitted;
};

TailCurve tail_curve(std::span<const double> returns, const stats::TailFit& fit, std::size_t max_points = 400);

/// sup |a[i] - b[i]| over a shared grid.
double sup_distance(std::span<const double> a, std::span<const double> b);

/// Smallest a[i] - b[i] over the grid (non-negative when a lies weakly above b).
double min_margin(std::span<const double> a, std::span<const double> b);

}  // namespace hfabm::analytics
