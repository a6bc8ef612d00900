#include "hfabm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hfabm::analytics {

CrashScan detect_flash_crashes(std::span<const double> closes, const CrashParams& p) {
  const auto n = static_cast<Session>(closes.size());
  CrashScan out;
  out.labels.assign(closes.size(), Phase::NormalTimes);

  Session t = 1;
  while (t < n) {
    double reference = 0.0;
    for (Session s = std::max<Session>(0, t - p.reference_window); s < t; ++s)
      reference = std::max(reference, closes[static_cast<std::size_t>(s)]);
    if (closes[static_cast<std::size_t>(t)] > (1.0 - p.threshold) * reference) {
      ++t;
      continue;
    }

    Session recovery = -1;
    Session trough = t;
    for (Session u = t + 1; u < n && u - t <= p.recovery_window; ++u) {
      if (closes[static_cast<std::size_t>(u)] >= reference) {
        recovery = u;
        break;
      }
      if (closes[static_cast<std::size_t>(u)] < closes[static_cast<std::size_t>(trough)]) trough = u;
    }
    if (recovery < 0) {
      ++t;
      continue;
    }

    FlashCrashEvent e;
    e.onset = t;
    e.trough = trough;
    e.recovery = recovery;
    e.reference = reference;
    e.depth = (reference - closes[static_cast<std::size_t>(trough)]) / reference;
    e.duration = recovery - t;
    out.events.push_back(e);
    for (Session s = t; s <= trough; ++s) out.labels[static_cast<std::size_t>(s)] = Phase::Crash;
    for (Session s = trough + 1; s <= recovery; ++s) out.labels[static_cast<std::size_t>(s)] = Phase::Recovery;
    t = recovery + 1;
  }
  return out;
}

CrashScan label_run(RunRecord& run, const CrashParams& p) {
  const auto closes = run.closes();
  CrashScan scan = detect_flash_crashes(closes, p);
  for (std::size_t i = 0; i < run.sessions.size(); ++i) run.sessions[i].phase = scan.labels[i];
  return scan;
}

std::string_view to_string(Condition c) noexcept {
  switch (c) {
    case Condition::FlashCrashes: return "flash_crashes";
    case Condition::NormalTimes: return "normal_times";
    case Condition::Unconditional: break;
  }
  return "unconditional";
}

std::string_view to_string(VolumeKind v) noexcept {
  switch (v) {
    case VolumeKind::HF: return "hft";
    case VolumeKind::LF: return "lft";
    case VolumeKind::Total: break;
  }
  return "total";
}

std::string_view to_string(VolumeSource v) noexcept { return v == VolumeSource::Executed ? "executed" : "submitted"; }

namespace {

double volume_of(const SessionRecord& s, VolumeKind kind, VolumeSource source) {
  if (source == VolumeSource::Submitted) {
    switch (kind) {
      case VolumeKind::HF: return static_cast<double>(s.hf_volume());
      case VolumeKind::LF: return static_cast<double>(s.lf_volume());
      case VolumeKind::Total: return static_cast<double>(s.total_volume());
    }
  }
  switch (kind) {
    case VolumeKind::HF: return static_cast<double>(s.hf_exec_vol);
    case VolumeKind::LF: return static_cast<double>(s.lf_exec_vol);
    case VolumeKind::Total: break;
  }
  return static_cast<double>(s.hf_exec_vol + s.lf_exec_vol);
}

bool in_condition(Phase p, Condition c) {
  switch (c) {
    case Condition::FlashCrashes: return p == Phase::Crash || p == Phase::Recovery;
    case Condition::NormalTimes: return p == Phase::NormalTimes;
    case Condition::Unconditional: break;
  }
  return true;
}

}  // namespace

RunCorrelations run_correlations(const RunRecord& run, VolumeSource source) {
  RunCorrelations out;
  const auto closes = run.closes();
  if (closes.size() < 2) return out;
  const auto returns = stats::log_returns(closes);

  for (std::size_t ci = 0; ci < kConditions.size(); ++ci) {
    std::vector<std::size_t> idx;
    for (std::size_t t = 1; t < run.sessions.size(); ++t)
      if (in_condition(run.sessions[t].phase, kConditions[ci])) idx.push_back(t);
    if (idx.size() < 3) continue;

    std::vector<double> r;
    r.reserve(idx.size());
    for (std::size_t t : idx) r.push_back(returns[t - 1]);
    for (std::size_t vi = 0; vi < kVolumeKinds.size(); ++vi) {
      std::vector<double> v;
      v.reserve(idx.size());
      for (std::size_t t : idx) v.push_back(volume_of(run.sessions[t], kVolumeKinds[vi], source));
      out.cell[ci][vi] = stats::pearson(r, v);
    }
  }
  return out;
}

CorrelationTable conditional_correlations(std::span<const RunRecord> runs, VolumeSource source) {
  CorrelationTable table;
  table.source = source;
  for (const auto& run : runs) table.per_run.push_back(run_correlations(run, source));
  for (std::size_t ci = 0; ci < 3; ++ci)
    for (std::size_t vi = 0; vi < 3; ++vi) {
      std::vector<double> values;
      for (const auto& rc : table.per_run)
        if (rc.cell[ci][vi]) values.push_back(*rc.cell[ci][vi]);
      if (!values.empty()) table.cell[ci][vi] = stats::mean_se(values);
    }
  return table;
}

std::size_t phase_index(Phase p) {
  switch (p) {
    case Phase::NormalTimes: return 0;
    case Phase::Crash: return 1;
    case Phase::Recovery: return 2;
    case Phase::Unlabeled: break;
  }
  throw std::invalid_argument("phase_index: session is unlabeled");
}

namespace {

void fill_curves(PhaseCurves& c) {
  for (std::size_t k = 0; k < 3; ++k) {
    if (c.samples[k].empty()) continue;
    c.kernel[k] = stats::kernel_ccdf(c.samples[k], c.grid);
    c.empirical[k] = stats::empirical_ccdf(c.samples[k], c.grid);
    c.density[k] = stats::kernel_density(c.samples[k], c.grid);
  }
}

}  // namespace

PhaseCurves spread_distribution_by_phase(std::span<const RunRecord> runs, std::size_t grid_points) {
  PhaseCurves c;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (const auto& run : runs)
    for (const auto& s : run.sessions) {
      if (!s.spread_end || s.phase == Phase::Unlabeled) continue;
      c.samples[phase_index(s.phase)].push_back(*s.spread_end);
      lo = std::min(lo, *s.spread_end);
      hi = std::max(hi, *s.spread_end);
    }
  if (!std::isfinite(lo)) return c;
  if (hi <= lo) hi = lo + 1.0;
  c.grid = stats::linear_grid(lo, hi, grid_points);
  fill_curves(c);
  return c;
}

std::optional<double> sell_concentration(const SessionRecord& s, TraderClass cls) noexcept {
  const Volume sell = cls == TraderClass::LF ? s.lf_sell_vol : s.hf_sell_vol;
  const Volume total = cls == TraderClass::LF ? s.lf_volume() : s.hf_volume();
  if (total <= 0) return std::nullopt;
  return static_cast<double>(sell) / static_cast<double>(total);
}

PhaseCurves sell_concentration_ratio(std::span<const RunRecord> runs, TraderClass cls, std::size_t grid_points) {
  PhaseCurves c;
  for (const auto& run : runs)
    for (const auto& s : run.sessions) {
      if (s.phase == Phase::Unlabeled) continue;
      if (auto r = sell_concentration(s, cls)) c.samples[phase_index(s.phase)].push_back(*r);
    }
  c.grid = stats::linear_grid(0.0, 1.0, grid_points);
  fill_curves(c);
  return c;
}

double volatility(std::span<const double> returns) { return stats::stddev(returns); }

std::vector<double> pooled_returns(std::span<const RunRecord> runs) {
  std::vector<double> out;
  for (const auto& run : runs) {
    const auto r = stats::log_returns(run.closes());
    out.insert(out.end(), r.begin(), r.end());
  }
  return out;
}

StatSummary summarize(std::span<RunRecord> runs, const CrashParams& p) {
  StatSummary s;
  s.runs = runs.size();
  std::vector<double> sigmas, counts, durations;
  for (auto& run : runs) {
    RunStats rs;
    rs.seed = run.seed;
    const CrashScan scan = label_run(run, p);
    rs.crashes = scan.events;
    rs.n_crashes = scan.events.size();
    if (!scan.events.empty()) {
      double total = 0.0;
      for (const auto& e : scan.events) total += static_cast<double>(e.duration);
      rs.mean_duration = total / static_cast<double>(scan.events.size());
      durations.push_back(*rs.mean_duration);
    }
    rs.sigma_p = volatility(stats::log_returns(run.closes()));
    sigmas.push_back(rs.sigma_p);
    counts.push_back(static_cast<double>(rs.n_crashes));
    s.per_run.push_back(std::move(rs));
  }
  s.sigma_p = stats::mean_se(sigmas);
  s.crash_count = stats::mean_se(counts);
  s.mean_duration = stats::mean_se(durations);
  s.correlations = conditional_correlations(runs, VolumeSource::Submitted);
  s.correlations_executed = conditional_correlations(runs, VolumeSource::Executed);
  try {
    s.tail = stats::tail_fit(pooled_returns(runs));
  } catch (const std::invalid_argument&) {
    s.tail.reset();  // too few negative returns for a tail fit
  }
  return s;
}

std::size_t AcfBattery::inside_band() const {
  return static_cast<std::size_t>(
      std::count_if(mean.returns.begin(), mean.returns.end(), [&](double v) { return std::fabs(v) <= band; }));
}

AcfBattery acf_battery(std::span<const RunRecord> runs, std::size_t max_lag) {
  AcfBattery out;
  out.max_lag = max_lag;
  out.mean.returns.assign(max_lag, 0.0);
  out.mean.abs.assign(max_lag, 0.0);
  out.mean.squared.assign(max_lag, 0.0);
  std::size_t shortest = std::numeric_limits<std::size_t>::max();
  for (const auto& run : runs) {
    const auto r = stats::log_returns(run.closes());
    shortest = std::min(shortest, r.size());
    std::vector<double> a(r.size()), q(r.size());
    for (std::size_t i = 0; i < r.size(); ++i) {
      a[i] = std::fabs(r[i]);
      q[i] = r[i] * r[i];
    }
    AcfRun one{stats::acf(r, max_lag).values, stats::acf(a, max_lag).values, stats::acf(q, max_lag).values};
    for (std::size_t k = 0; k < max_lag; ++k) {
      out.mean.returns[k] += one.returns[k];
      out.mean.abs[k] += one.abs[k];
      out.mean.squared[k] += one.squared[k];
    }
    out.per_run.push_back(std::move(one));
  }
  if (runs.empty()) return out;
  const double n = static_cast<double>(runs.size());
  for (std::size_t k = 0; k < max_lag; ++k) {
    out.mean.returns[k] /= n;
    out.mean.abs[k] /= n;
    out.mean.squared[k] /= n;
  }
  out.band = 2.58 / std::sqrt(static_cast<double>(shortest));
  return out;
}

ReturnDensity return_density(std::span<const double> returns, std::size_t grid_points) {
  ReturnDensity out;
  if (returns.size() < 2) return out;
  out.mean = stats::mean(returns);
  out.sd = stats::stddev(returns);
  const auto [lo, hi] = std::minmax_element(returns.begin(), returns.end());
  out.grid = stats::linear_grid(*lo, *hi > *lo ? *hi : *lo + 1.0, grid_points);
  out.kernel = stats::kernel_density(returns, out.grid);
  out.normal.reserve(out.grid.size());
  for (double x : out.grid) {
    const double z = out.sd > 0.0 ? (x - out.mean) / out.sd : 0.0;
    out.normal.push_back(out.sd > 0.0 ? std::exp(-0.5 * z * z) / (out.sd * std::sqrt(2.0 * std::numbers::pi)) : 0.0);
  }
  return out;
}

TailCurve tail_curve(std::span<const double> returns, const stats::TailFit& fit, std::size_t max_points) {
  TailCurve out;
  std::vector<double> mag;
  for (double r : returns)
    if (r < 0.0) mag.push_back(-r);
  if (mag.empty() || max_points == 0) return out;
  std::sort(mag.begin(), mag.end());
  const double n = static_cast<double>(mag.size());
  const auto first = static_cast<std::size_t>(std::lower_bound(mag.begin(), mag.end(), fit.x_min) - mag.begin());
  const std::size_t k = mag.size() - first;
  if (k == 0) return out;
  // Log-spaced ranks from the largest observation down keep both ends visible.
  std::vector<std::size_t> idx;
  const double top = std::log(static_cast<double>(k));
  for (std::size_t j = 0; j < max_points; ++j) {
    const double f = max_points == 1 ? 0.0 : static_cast<double>(j) / static_cast<double>(max_points - 1);
    const auto rank = static_cast<std::size_t>(std::llround(std::exp(f * top))) - 1;  // 0-based from the top
    const std::size_t i = mag.size() - 1 - std::min(rank, k - 1);
    if (idx.empty() || idx.back() != i) idx.push_back(i);
  }
  std::sort(idx.begin(), idx.end());
  idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
  const double share = static_cast<double>(fit.n_tail) / n;
  for (std::size_t i : idx) {
    out.x.push_back(mag[i]);
    out.empirical.push_back(static_cast<double>(mag.size() - i) / n);
    out.fitted.push_back(share * std::pow(mag[i] / fit.x_min, -fit.alpha));
  }
  return out;
}

double sup_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("sup_distance: grids differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::fabs(a[i] - b[i]));
  return d;
}

double min_margin(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("min_margin: grids differ");
  double m = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < a.size(); ++i) m = std::min(m, a[i] - b[i]);
  return m;
}

}  // namespace hfabm::analytics
