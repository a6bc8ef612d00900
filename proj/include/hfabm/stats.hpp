#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace hfabm::stats {

double mean(std::span<const double> x);
/// Sample variance (n - 1 denominator). Zero for fewer than two points.
double variance(std::span<const double> x);
double stddev(std::span<const double> x);
/// m4 / m2^2 - 3 with population moments. Throws on fewer than four points or zero variance.
double excess_kurtosis(std::span<const double> x);
/// Median of a copy of the data. Throws on empty input.
double median(std::span<const double> x);

/// Pearson correlation; empty when either series is constant or n < 2.
std::optional<double> pearson(std::span<const double> x, std::span<const double> y);

/// r_t = ln(p_t) - ln(p_{t-1}). Throws std::invalid_argument on a non-positive price.
std::vector<double> log_returns(std::span<const double> prices);

struct AcfResult {
  /// Lags 1..max_lag.
  std::vector<double> values;
  /// Half-width of the 99.3% white-noise band, 2.58 / sqrt(n).
  double band = 0.0;
};

/// Sample autocorrelations (biased autocovariance over the lag-0 variance).
/// Throws std::invalid_argument on a constant series or n <= max_lag.
AcfResult acf(std::span<const double> x, std::size_t max_lag);

/// Mean and its standard error across independent replications.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
  std::size_t n = 0;
};
MeanSe mean_se(std::span<const double> x);

/// Normal-reference bandwidth 1.06 * sd * n^(-1/5); zero for constant data.
double normal_reference_bandwidth(std::span<const double> x);

/// `points` evenly spaced values on [lo, hi].
std::vector<double> linear_grid(double lo, double hi, std::size_t points);

/// Gaussian-kernel density on the grid. A zero bandwidth means the bandwidth
/// is chosen by normal_reference_bandwidth.
std::vector<double> kernel_density(std::span<const double> samples, std::span<const double> grid,
                                   double bandwidth = 0.0);
/// P(X > x) under the Gaussian-kernel estimate. Degenerate (constant) samples
/// give the empirical step function.
std::vector<double> kernel_ccdf(std::span<const double> samples, std::span<const double> grid,
                                double bandwidth = 0.0);
/// Fraction of samples strictly above each grid point.
std::vector<double> empirical_ccdf(std::span<const double> samples, std::span<const double> grid);

struct TailFit {
  /// Tail index a of P(X > x) ~ (x / x_min)^-a, Hill estimate.
  double alpha = 0.0;
  /// Standard error (alpha / sqrt(n_tail)).
  double alpha_se = 0.0;
  double x_min = 0.0;
  std::size_t n_tail = 0;
  /// Kolmogorov-Smirnov distance of the tail to the fitted power law.
  double ks = 0.0;
};

struct TailFitOptions {
  std::size_t min_observations = 500;
  /// Smallest tail kept when scanning x_min candidates.
  std::size_t min_tail = 50;
  /// Upper bound on the number of x_min candidates scanned.
  std::size_t max_candidates = 1000;
};

/// Power-law fit of positive magnitudes; x_min minimizes the KS distance over
/// observed values. Throws std::invalid_argument below min_observations.
TailFit fit_power_law(std::span<const double> magnitudes, const TailFitOptions& opt = {});

struct ReturnTail {
  TailFit fit;
  double excess_kurtosis = 0.0;
};
/// Fits the tail of the negative returns (as magnitudes) and reports the
/// excess kurtosis of all returns.
ReturnTail tail_fit(std::span<const double> returns, const TailFitOptions& opt = {});

}  // namespace hfabm::stats
