#include "hfabm/acceptance.hpp"

#include <cmath>
#include <cstdio>
#include <string>

namespace hfabm::acceptance {

using experiments::PointStats;

namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string mark(bool ok) { return ok ? "ok" : "FAIL"; }

void part(Verdict& v, bool ok, const std::string& text) {
  v.pass = v.pass && ok;
  if (!v.detail.empty()) v.detail += "; ";
  v.detail += text + " " + mark(ok);
}

Verdict start(int id, std::string name) {
  Verdict v;
  v.criterion = id;
  v.name = std::move(name);
  v.pass = true;
  return v;
}

constexpr std::size_t kSubmitted = 0;
constexpr std::size_t kUnconditional = 0;
constexpr std::size_t kFlash = 1;
constexpr std::size_t kNormal = 2;
constexpr std::size_t kHfVol = 1;
constexpr std::size_t kLfVol = 2;
constexpr std::size_t kHf = 0;
constexpr std::size_t kLf = 1;
constexpr std::size_t kCrashPhase = 1;

}  // namespace

std::string format(const Verdict& v) {
  std::string head = v.pass ? "PASS" : "FAIL";
  if (!v.complete) head = v.pass ? "PARTIAL-PASS" : "PARTIAL-FAIL";
  return head + " [" + std::to_string(v.criterion) + "] " + v.name + ": " + v.detail;
}

Verdict stylized_facts(const PointStats& b) {
  Verdict v = start(1, "stylized facts");
  const std::size_t lags = std::min(kAcfLags, b.acf_returns.size());
  if (lags < kAcfLags) {
    part(v, false, "ACF unavailable for lags 1-20");
    return v;
  }
  std::size_t inside = 0;
  for (std::size_t k = 0; k < kAcfLags; ++k)
    if (std::fabs(b.acf_returns[k]) <= b.acf_band) ++inside;
  const auto needed = static_cast<std::size_t>(std::ceil(kAcfInsideShare * static_cast<double>(kAcfLags)));
  part(v, inside >= needed,
       "(a) " + std::to_string(inside) + "/20 lags inside +/-" + fmt("%.4f", b.acf_band));

  bool positive = true;
  for (std::size_t k = 0; k < kAcfLags; ++k) positive = positive && b.acf_abs[k] > 0.0;
  part(v, positive && b.acf_abs[0] >= b.acf_squared[0],
       "(b) |r| ACF positive at all lags " + std::string(positive ? "yes" : "no") + ", lag-1 |r| " +
           fmt("%.3f", b.acf_abs[0]) + " vs r^2 " + fmt("%.3f", b.acf_squared[0]));

  const bool kurt = b.excess_kurtosis && *b.excess_kurtosis > kMinExcessKurtosis;
  const bool tail = b.tail && std::isfinite(b.tail->alpha) && b.tail->alpha > 0.0;
  part(v, kurt && tail,
       "(c) excess kurtosis " + (b.excess_kurtosis ? fmt("%.2f", *b.excess_kurtosis) : std::string("n/a")) +
           ", tail exponent " + (b.tail ? fmt("%.2f", b.tail->alpha) : std::string("n/a")));
  return v;
}

Verdict volatility_bands(const PointStats& b, const PointStats* o) {
  Verdict v = start(2, "volatility and crash bands");
  const double s = b.sigma_p.mean;
  part(v, s >= kSigmaLo && s <= kSigmaHi, "sigma_P " + fmt("%.4f", s) + " in [0.010, 0.040]");
  const double c = b.crash_count.mean;
  part(v, c >= kCrashesLo && c <= kCrashesHi, "crashes/run " + fmt("%.2f", c) + " in [3, 18]");
  const bool has_d = b.mean_duration.n > 0;
  const double d = b.mean_duration.mean;
  part(v, has_d && d >= kDurationLo && d <= kDurationHi,
       "duration " + (has_d ? fmt("%.2f", d) : std::string("n/a")) + " in [7, 28]");
  if (o) {
    part(v, s > kSigmaRatio * o->sigma_p.mean,
         "sigma_P ratio " + fmt("%.2f", o->sigma_p.mean > 0 ? s / o->sigma_p.mean : INFINITY) + " > 2");
    part(v, o->crash_count.mean == 0.0, "only-LFT crashes/run " + fmt("%.2f", o->crash_count.mean) + " = 0");
  } else {
    v.complete = false;
    v.detail += "; only-LFT point not available";
  }
  return v;
}

Verdict only_lft_crash_free(const PointStats& o) {
  Verdict v = start(2, "only-LFT crash-free");
  v.complete = false;
  part(v, o.crash_count.mean == 0.0, "only-LFT crashes/run " + fmt("%.2f", o.crash_count.mean) + " = 0");
  return v;
}

Verdict correlation_signs(const PointStats& b) {
  Verdict v = start(3, "return-volume correlation signs");
  const auto& flash = b.correlations[kSubmitted][kFlash][kHfVol];
  const auto& normal = b.correlations[kSubmitted][kNormal][kHfVol];
  if (!flash || !normal) {
    part(v, false, "HFT-volume correlation missing for flash crashes or normal times");
  } else {
    const double gap_se = std::sqrt(flash->se * flash->se + normal->se * normal->se);
    part(v, flash->mean < 0.0, "flash-crash HFT corr " + fmt("%.3f", flash->mean) + " < 0");
    part(v, flash->mean <= normal->mean - kCorrelationSeGap * gap_se,
         "below normal-times " + fmt("%.3f", normal->mean) + " by >= 2 SE (" + fmt("%.3f", gap_se) + ")");
  }
  const auto& lf_u = b.correlations[kSubmitted][kUnconditional][kLfVol];
  const auto& lf_n = b.correlations[kSubmitted][kNormal][kLfVol];
  part(v, lf_u && lf_u->mean >= 0.0,
       "unconditional LFT corr " + (lf_u ? fmt("%.3f", lf_u->mean) : std::string("n/a")) + " >= 0");
  part(v, lf_n && lf_n->mean >= 0.0,
       "normal-times LFT corr " + (lf_n ? fmt("%.3f", lf_n->mean) : std::string("n/a")) + " >= 0");
  return v;
}

Verdict anatomy(const PointStats& b) {
  Verdict v = start(4, "flash-crash anatomy");
  part(v, b.spread_margin_kernel && *b.spread_margin_kernel >= 0.0,
       "min(CCDF_crash - CCDF_normal) of spreads " +
           (b.spread_margin_kernel ? fmt("%.4f", *b.spread_margin_kernel) : std::string("n/a")) + " >= 0");
  const auto& hf = b.concentration_median[kHf][kCrashPhase];
  const auto& lf = b.concentration_median[kLf][kCrashPhase];
  part(v, hf && *hf > kHfCrashMedianMin,
       "crash HFT sell-concentration median " + (hf ? fmt("%.3f", *hf) : std::string("n/a")) + " > 0.9");
  part(v, lf && *lf < kLfCrashMedianMax,
       "crash LFT median " + (lf ? fmt("%.3f", *lf) : std::string("n/a")) + " < 0.1");
  part(v, b.hf_recovery_sup_kernel && *b.hf_recovery_sup_kernel <= kRecoverySupMax,
       "HFT recovery-vs-normal CCDF sup " +
           (b.hf_recovery_sup_kernel ? fmt("%.3f", *b.hf_recovery_sup_kernel) : std::string("n/a")) + " <= 0.1");
  return v;
}

Verdict gamma_sweep(std::span<const PointStats> sweep) {
  Verdict v = start(5, "gamma_H sweep");
  if (sweep.size() < 2) {
    part(v, false, "need at least two sweep points");
    return v;
  }
  std::string counts, sigmas;
  bool decreasing = true, non_increasing = true;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    counts += (i ? " > " : "") + fmt("%.2f", sweep[i].crash_count.mean);
    sigmas += (i ? " >= " : "") + fmt("%.4f", sweep[i].sigma_p.mean);
    if (i > 0) {
      decreasing = decreasing && sweep[i].crash_count.mean < sweep[i - 1].crash_count.mean;
      non_increasing = non_increasing && sweep[i].sigma_p.mean <= sweep[i - 1].sigma_p.mean;
    }
  }
  part(v, decreasing, "crashes " + counts);
  part(v, non_increasing, "sigma_P " + sigmas);
  const auto& first = sweep.front().mean_duration;
  const auto& last = sweep.back().mean_duration;
  const bool both = first.n > 0 && last.n > 0;
  part(v, both && last.mean > first.mean,
       "duration at gamma_H=" + std::to_string(sweep.back().gamma_H) + " " +
           (last.n ? fmt("%.2f", last.mean) : std::string("n/a")) + " > gamma_H=" +
           std::to_string(sweep.front().gamma_H) + " " + (first.n ? fmt("%.2f", first.mean) : std::string("n/a")));
  return v;
}

}  // namespace hfabm::acceptance
