#include "hfabm/stats.hpp"

#include "hfabm/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hfabm::stats {

double mean(std::span<const double> x) {
  if (x.empty()) return 0.0;
  return kernels::sum(x) / static_cast<double>(x.size());
}

double variance(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  return kernels::central_sums(x, mean(x)).m2 / static_cast<double>(x.size() - 1);
}

double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

double excess_kurtosis(std::span<const double> x) {
  if (x.size() < 4) throw std::invalid_argument("excess_kurtosis: need at least 4 observations");
  const auto s = kernels::central_sums(x, mean(x));
  if (s.m2 <= 0.0) throw std::invalid_argument("excess_kurtosis: constant data");
  const double n = static_cast<double>(x.size());
  const double m2 = s.m2 / n;
  return (s.m4 / n) / (m2 * m2) - 3.0;
}

double median(std::span<const double> x) {
  if (x.empty()) throw std::invalid_argument("median: empty input");
  std::vector<double> v(x.begin(), x.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

std::optional<double> pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("pearson: length mismatch");
  if (x.size() < 2) return std::nullopt;
  const double mx = mean(x);
  const double my = mean(y);
  const double sxx = kernels::central_sums(x, mx).m2;
  const double syy = kernels::central_sums(y, my).m2;
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  const double r = kernels::centered_dot(x, y, mx, my) / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

std::vector<double> log_returns(std::span<const double> prices) {
  std::vector<double> r;
  if (prices.empty()) return r;
  r.reserve(prices.size() - 1);
  for (double p : prices)
    if (!(p > 0.0)) throw std::invalid_argument("log_returns: prices must be positive");
  for (std::size_t t = 1; t < prices.size(); ++t) r.push_back(std::log(prices[t]) - std::log(prices[t - 1]));
  return r;
}

AcfResult acf(std::span<const double> x, std::size_t max_lag) {
  if (x.size() <= max_lag) throw std::invalid_argument("acf: series shorter than max_lag + 1");
  const double m = mean(x);
  const double c0 = kernels::central_sums(x, m).m2;
  if (c0 <= 0.0) throw std::invalid_argument("acf: constant series has no autocorrelation");
  AcfResult out;
  out.values.reserve(max_lag);
  for (std::size_t k = 1; k <= max_lag; ++k) out.values.push_back(kernels::lagged_cross(x, k, m) / c0);
  out.band = 2.58 / std::sqrt(static_cast<double>(x.size()));
  return out;
}

MeanSe mean_se(std::span<const double> x) {
  MeanSe out;
  out.n = x.size();
  if (x.empty()) return out;
  out.mean = mean(x);
  out.se = x.size() > 1 ? stddev(x) / std::sqrt(static_cast<double>(x.size())) : 0.0;
  return out;
}

double normal_reference_bandwidth(std::span<const double> x) {
  if (x.size() < 2) return 0.0;
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  if (*lo == *hi) return 0.0;  // the computed sd of equal values can be a rounding residue
  return 1.06 * stddev(x) * std::pow(static_cast<double>(x.size()), -0.2);
}

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = lo;
    return g;
  }
  for (std::size_t i = 0; i < points; ++i)
    g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  return g;
}

namespace {

// Contributions beyond this many bandwidths are treated as exactly 0 or 1.
constexpr double kCutoff = 9.0;

std::vector<double> sorted_copy(std::span<const double> x) {
  std::vector<double> v(x.begin(), x.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

std::vector<double> kernel_density(std::span<const double> samples, std::span<const double> grid, double bandwidth) {
  std::vector<double> out(grid.size(), 0.0);
  if (samples.empty()) return out;
  const double h = bandwidth > 0.0 ? bandwidth : normal_reference_bandwidth(samples);
  if (h <= 0.0) return out;
  const auto v = sorted_copy(samples);
  const double norm = 1.0 / (static_cast<double>(v.size()) * h * std::sqrt(2.0 * std::numbers::pi));
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    auto lo = std::lower_bound(v.begin(), v.end(), x - kCutoff * h);
    auto hi = std::upper_bound(v.begin(), v.end(), x + kCutoff * h);
    double s = 0.0;
    for (auto it = lo; it != hi; ++it) {
      const double z = (x - *it) / h;
      s += std::exp(-0.5 * z * z);
    }
    out[g] = s * norm;
  }
  return out;
}

std::vector<double> kernel_ccdf(std::span<const double> samples, std::span<const double> grid, double bandwidth) {
  std::vector<double> out(grid.size(), 0.0);
  if (samples.empty()) return out;
  const double h = bandwidth > 0.0 ? bandwidth : normal_reference_bandwidth(samples);
  if (h <= 0.0) return empirical_ccdf(samples, grid);
  const auto v = sorted_copy(samples);
  const double n = static_cast<double>(v.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double x = grid[g];
    auto lo = std::lower_bound(v.begin(), v.end(), x - kCutoff * h);
    auto hi = std::upper_bound(v.begin(), v.end(), x + kCutoff * h);
    // Samples above the window contribute 1 each.
    double s = static_cast<double>(v.end() - hi);
    for (auto it = lo; it != hi; ++it) s += 0.5 * std::erfc((x - *it) / (h * std::numbers::sqrt2));
    out[g] = std::clamp(s / n, 0.0, 1.0);
  }
  // Enforce monotonicity against rounding in the window sums.
  for (std::size_t g = 1; g < out.size(); ++g) out[g] = std::min(out[g], out[g - 1]);
  return out;
}

std::vector<double> empirical_ccdf(std::span<const double> samples, std::span<const double> grid) {
  std::vector<double> out(grid.size(), 0.0);
  if (samples.empty()) return out;
  const auto v = sorted_copy(samples);
  const double n = static_cast<double>(v.size());
  for (std::size_t g = 0; g < grid.size(); ++g)
    out[g] = static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), grid[g])) / n;
  return out;
}

TailFit fit_power_law(std::span<const double> magnitudes, const TailFitOptions& opt) {
  std::vector<double> x;
  x.reserve(magnitudes.size());
  for (double v : magnitudes)
    if (v > 0.0) x.push_back(v);
  if (x.size() < opt.min_observations)
    throw std::invalid_argument("tail_fit: " + std::to_string(x.size()) + " tail observations, need at least " +
                                std::to_string(opt.min_observations));
  std::sort(x.begin(), x.end());
  const std::size_t n = x.size();

  std::vector<double> lx(n);
  for (std::size_t i = 0; i < n; ++i) lx[i] = std::log(x[i]);
  // suffix[i] = sum of lx[i..n-1]
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix[i] = suffix[i + 1] + lx[i];

  const std::size_t min_tail = std::max<std::size_t>(opt.min_tail, 2);
  const std::size_t last = n >= min_tail ? n - min_tail : 0;
  const std::size_t eligible = last + 1;
  const std::size_t step = std::max<std::size_t>(1, (eligible + opt.max_candidates - 1) / opt.max_candidates);

  TailFit best;
  best.ks = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= last; i += step) {
    if (i > 0 && x[i] == x[i - 1]) continue;  // same x_min as an earlier candidate
    const std::size_t k = n - i;
    const double log_sum = suffix[i] - static_cast<double>(k) * lx[i];
    if (log_sum <= 0.0) continue;
    const double alpha = static_cast<double>(k) / log_sum;
    const double kd = static_cast<double>(k);
    double d = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      const double f = 1.0 - std::exp(-alpha * (lx[i + j] - lx[i]));
      d = std::max({d, f - static_cast<double>(j) / kd, static_cast<double>(j + 1) / kd - f});
    }
    if (d < best.ks) {
      best.ks = d;
      best.alpha = alpha;
      best.x_min = x[i];
      best.n_tail = k;
      best.alpha_se = alpha / std::sqrt(kd);
    }
  }
  if (!std::isfinite(best.ks)) throw std::invalid_argument("tail_fit: no usable x_min candidate");
  return best;
}

ReturnTail tail_fit(std::span<const double> returns, const TailFitOptions& opt) {
  std::vector<double> neg;
  for (double r : returns)
    if (r < 0.0) neg.push_back(-r);
  ReturnTail out;
  out.fit = fit_power_law(neg, opt);
  out.excess_kurtosis = excess_kurtosis(returns);
  return out;
}

}  // namespace hfabm::stats
