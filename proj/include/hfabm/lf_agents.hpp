#pragma once

#include "hfabm/orderbook.hpp"
#include "hfabm/types.hpp"

#include <optional>
#include <span>
#include <vector>

namespace hfabm {

enum class Strategy : std::uint8_t { Chartist, Fundamentalist };

struct LFParams {
  double alpha_c = 0.04;
  double alpha_f = 0.04;
  double sigma_c = 0.05;
  double sigma_f = 0.01;
  double sigma_z = 0.01;
  double delta = 0.0001;
  double sigma_y = 0.01;
  double zeta = 1.0;
  Session gamma_L = 20;
  double theta = 20.0;
  double theta_min = 10.0;
  double theta_max = 40.0;
  /// Asset units per unit of demand.
  double demand_scale = 100.0;
};

struct Demands {
  double chartist = 0.0;
  double fundamentalist = 0.0;
};

struct LFTrader {
  std::int64_t id = 0;
  double theta_i = 0.0;
  Strategy strategy = Strategy::Chartist;
  Session next_active_at = 0;
  std::optional<double> last_limit_price;
  std::optional<Demands> last_demands;
};

/// Fundamental values F_0..F_t. All entries are positive.
struct FundamentalTrack {
  std::vector<double> values;
  double current() const { return values.back(); }
};

/// Exponential with the given mean, redrawn until it lands in [lo, hi].
double sample_activation_period(double mean, double lo, double hi, Rng& rng);

bool lf_is_active(const LFTrader& trader, Session t) noexcept;
/// next_active_at = t + round(theta_i), at least one session ahead.
void schedule_next_activation(LFTrader& trader, Session t) noexcept;

double chartist_demand(double close_prev, double close_prev2, double alpha_c, double shock) noexcept;
double chartist_demand(double close_prev, double close_prev2, const LFParams& p, Rng& rng);
double fundamentalist_demand(double fundamental, double close_prev, double alpha_f, double shock) noexcept;
double fundamentalist_demand(double fundamental, double close_prev, const LFParams& p, Rng& rng);

/// Geometric random walk step. Shocks with 1 + y <= 0 are redrawn.
double fundamental_step(double previous, double delta, double shock) noexcept;
double evolve_fundamental(FundamentalTrack& track, const LFParams& p, Rng& rng);

/// close_prev * (1 + delta) * (1 + z), rounded to the tick, floored at one tick.
Ticks lf_limit_price(double close_prev, double delta, double z, double tick_size) noexcept;
Ticks lf_limit_price(double close_prev, const LFParams& p, double tick_size, Rng& rng);

/// Signed demand to order size: round(|D| * scale).
Volume demand_to_size(double demand, double demand_scale) noexcept;

struct LFOrderContext {
  double close_prev;
  double close_prev2;
  double fundamental;
  Session session;
  double tick_size;
};

/// Draws both demands and a limit price for an active trader, records them on
/// the trader, advances its schedule, and returns the order for its current
/// strategy (nothing when the size rounds to zero). The id is consumed only
/// when an order is returned.
std::optional<Order> lf_order(LFTrader& trader, const LFOrderContext& ctx, const LFParams& p, OrderId& next_id,
                              Rng& rng);

/// (close - limit) * demand
double lf_profit(double close, double limit_price, double demand) noexcept;

/// Logit probability of picking the chartist rule: 1 / (1 + exp((pi_f - pi_c) / zeta)).
double chartist_probability(double pi_c, double pi_f, double zeta) noexcept;
Strategy switch_strategy(double pi_c, double pi_f, double zeta, Rng& rng);

/// Evaluates both hypothetical profits for a trader that submitted this session
/// and redraws its strategy. No-op for traders without a recorded limit price.
void update_strategy(LFTrader& trader, double close, const LFParams& p, Rng& rng);

}  // namespace hfabm
