#pragma once

#include "hfabm/config.hpp"
#include "hfabm/hf_agents.hpp"
#include "hfabm/lf_agents.hpp"
#include "hfabm/orderbook.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace hfabm {

enum class Phase : std::uint8_t { Unlabeled, NormalTimes, Crash, Recovery };

std::string_view to_string(Phase p) noexcept;

struct SessionRecord {
  Session session = 0;
  double close = 0.0;
  double fundamental = 0.0;
  /// The spread HF traders face before their first submission. Under batch
  /// execution this precedes all matching and is usually negative.
  std::optional<double> spread_pre_match;
  /// After matching and expiry.
  std::optional<double> spread_end;
  Volume lf_buy_vol = 0;
  Volume lf_sell_vol = 0;
  Volume hf_buy_vol = 0;
  Volume hf_sell_vol = 0;
  /// Executed volume on each class's side of the session's trades.
  Volume lf_exec_vol = 0;
  Volume hf_exec_vol = 0;
  std::int64_t n_trades = 0;
  int hf_active = 0;
  Phase phase = Phase::Unlabeled;
  /// Filled only when RunOptions::keep_trades is set.
  std::vector<Trade> trades;

  Volume lf_volume() const noexcept { return lf_buy_vol + lf_sell_vol; }
  Volume hf_volume() const noexcept { return hf_buy_vol + hf_sell_vol; }
  Volume total_volume() const noexcept { return lf_volume() + hf_volume(); }
};

/// Population and outcome summary written to the run sidecar.
struct AgentSummary {
  double theta_mean = 0.0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  double delta_x_min = 0.0;
  double delta_x_max = 0.0;
  double final_chartist_share = 0.0;
  Volume max_abs_position = 0;
  std::int64_t hf_active_sessions = 0;
  std::int64_t lf_orders = 0;
  std::int64_t hf_orders = 0;
  // Pooled per-order HF profits.
  std::int64_t hf_profit_count = 0;
  double hf_profit_mean = 0.0;
  double hf_profit_sd = 0.0;
  double hf_profit_skewness = 0.0;
};

struct RunRecord {
  std::uint64_t seed = 0;
  std::string scenario;
  std::vector<SessionRecord> sessions;
  AgentSummary summary;

  std::vector<double> closes() const;
};

struct MarketState {
  Config config;
  Session session = 0;  // next session to run
  double initial_price = 100.0;
  std::vector<double> closes;
  FundamentalTrack fundamental;
  LimitOrderBook book;
  std::vector<LFTrader> lf;
  std::vector<HFTrader> hf;
  OrderId next_order_id = 1;
  std::int64_t lf_orders = 0;
  /// Profit of every HF order submitted so far, in submission order.
  std::vector<double> hf_profits;

  /// Close of session t - k as seen from the session about to run; the
  /// initial price stands in before the first sessions complete.
  double close_back(std::size_t k) const;
};

enum class Stage : std::uint8_t { Fundamental, LfSubmit, HfSubmit, Match, Close, Update, Expire };

struct RunOptions {
  bool keep_trades = false;
  /// When set, run_session appends each stage as it starts.
  std::vector<Stage>* trace = nullptr;
};

/// Validates the config and draws populations: theta_i (truncated exponential),
/// strategies (fair coin), delta_x (uniform), in that order.
MarketState init_state(const Config& config, Rng& rng);

SessionRecord run_session(MarketState& state, Rng& rng, const RunOptions& opts = {});

/// Maximum trade price, or the previous close when nothing traded.
double closing_price(std::span<const Trade> trades, double previous_close) noexcept;

RunRecord run_simulation(const Config& config, std::uint64_t seed, std::string scenario = "baseline",
                         const RunOptions& opts = {});

/// Called once per finished run (serialized, in completion order).
using RunCallback = std::function<void(std::size_t index, const RunRecord& run)>;

/// One run per seed, results in seed order whatever the thread count.
/// Throws std::invalid_argument on repeated seeds.
std::vector<RunRecord> run_monte_carlo(const Config& config, std::span<const std::uint64_t> seeds,
                                       std::string scenario = "baseline", unsigned threads = 1,
                                       const RunCallback& on_done = {});

/// `count` distinct seeds derived from a master seed.
std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t count);

}  // namespace hfabm
