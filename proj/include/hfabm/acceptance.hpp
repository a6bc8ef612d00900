#pragma once

#include "hfabm/experiments.hpp"

#include <span>
#include <string>

namespace hfabm::acceptance {

// Pinned thresholds.
inline constexpr std::size_t kAcfLags = 20;
inline constexpr double kAcfInsideShare = 0.90;
inline constexpr double kMinExcessKurtosis = 1.0;
inline constexpr double kSigmaLo = 0.010;
inline constexpr double kSigmaHi = 0.040;
inline constexpr double kCrashesLo = 3.0;
inline constexpr double kCrashesHi = 18.0;
inline constexpr double kDurationLo = 7.0;
inline constexpr double kDurationHi = 28.0;
inline constexpr double kSigmaRatio = 2.0;
inline constexpr double kCorrelationSeGap = 2.0;
inline constexpr double kHfCrashMedianMin = 0.9;
inline constexpr double kLfCrashMedianMax = 0.1;
inline constexpr double kRecoverySupMax = 0.1;

struct Verdict {
  int criterion = 0;
  std::string name;
  bool pass = false;
  /// False when only part of the criterion could be evaluated.
  bool complete = true;
  std::string detail;
};

/// "PASS [n] name: detail" (or FAIL / PARTIAL-...).
std::string format(const Verdict& v);

Verdict stylized_facts(const experiments::PointStats& baseline);
/// only_lft may be null: the baseline bands are then checked alone and the
/// verdict is marked incomplete.
Verdict volatility_bands(const experiments::PointStats& baseline, const experiments::PointStats* only_lft);
Verdict only_lft_crash_free(const experiments::PointStats& only_lft);
Verdict correlation_signs(const experiments::PointStats& baseline);
Verdict anatomy(const experiments::PointStats& baseline);
/// Points ordered by increasing gamma_H.
Verdict gamma_sweep(std::span<const experiments::PointStats> sweep);

}  // namespace hfabm::acceptance
