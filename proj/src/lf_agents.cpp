#include "hfabm/lf_agents.hpp"

#include <algorithm>
#include <cmath>

namespace hfabm {

namespace {

/// Normal(0, sd) draw with 1 + x > 0 so multiplicative shocks keep prices positive.
double positive_multiplier_shock(double sd, Rng& rng) {
  if (sd == 0.0) return 0.0;
  std::normal_distribution<double> dist(0.0, sd);
  for (;;) {
    const double x = dist(rng);
    if (1.0 + x > 0.0) return x;
  }
}

double normal_shock(double sd, Rng& rng) {
  if (sd == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, sd)(rng);
}

}  // namespace

double sample_activation_period(double mean, double lo, double hi, Rng& rng) {
  std::exponential_distribution<double> dist(1.0 / mean);
  for (;;) {
    const double x = dist(rng);
    if (x >= lo && x <= hi) return x;
  }
}

bool lf_is_active(const LFTrader& trader, Session t) noexcept { return t >= trader.next_active_at; }

void schedule_next_activation(LFTrader& trader, Session t) noexcept {
  const auto step = static_cast<Session>(std::llround(trader.theta_i));
  trader.next_active_at = t + std::max<Session>(step, 1);
}

double chartist_demand(double close_prev, double close_prev2, double alpha_c, double shock) noexcept {
  return alpha_c * (close_prev - close_prev2) + shock;
}

double chartist_demand(double close_prev, double close_prev2, const LFParams& p, Rng& rng) {
  return chartist_demand(close_prev, close_prev2, p.alpha_c, normal_shock(p.sigma_c, rng));
}

double fundamentalist_demand(double fundamental, double close_prev, double alpha_f, double shock) noexcept {
  return alpha_f * (fundamental - close_prev) + shock;
}

double fundamentalist_demand(double fundamental, double close_prev, const LFParams& p, Rng& rng) {
  return fundamentalist_demand(fundamental, close_prev, p.alpha_f, normal_shock(p.sigma_f, rng));
}

double fundamental_step(double previous, double delta, double shock) noexcept {
  return previous * (1.0 + delta) * (1.0 + shock);
}

double evolve_fundamental(FundamentalTrack& track, const LFParams& p, Rng& rng) {
  const double next = fundamental_step(track.current(), p.delta, positive_multiplier_shock(p.sigma_y, rng));
  track.values.push_back(next);
  return next;
}

Ticks lf_limit_price(double close_prev, double delta, double z, double tick_size) noexcept {
  return std::max<Ticks>(1, to_ticks(close_prev * (1.0 + delta) * (1.0 + z), tick_size));
}

Ticks lf_limit_price(double close_prev, const LFParams& p, double tick_size, Rng& rng) {
  return lf_limit_price(close_prev, p.delta, positive_multiplier_shock(p.sigma_z, rng), tick_size);
}

Volume demand_to_size(double demand, double demand_scale) noexcept {
  return static_cast<Volume>(std::llround(std::abs(demand) * demand_scale));
}

std::optional<Order> lf_order(LFTrader& trader, const LFOrderContext& ctx, const LFParams& p, OrderId& next_id,
                              Rng& rng) {
  // Draw order: chartist noise, fundamentalist noise, price offset.
  Demands d;
  d.chartist = chartist_demand(ctx.close_prev, ctx.close_prev2, p, rng);
  d.fundamentalist = fundamentalist_demand(ctx.fundamental, ctx.close_prev, p, rng);
  const Ticks limit = lf_limit_price(ctx.close_prev, p, ctx.tick_size, rng);

  trader.last_demands = d;
  trader.last_limit_price = static_cast<double>(limit) * ctx.tick_size;
  schedule_next_activation(trader, ctx.session);

  const double demand = trader.strategy == Strategy::Chartist ? d.chartist : d.fundamentalist;
  const Volume size = demand_to_size(demand, p.demand_scale);
  if (size == 0) return std::nullopt;

  Order o;
  o.id = next_id++;
  o.side = demand > 0.0 ? Side::Buy : Side::Sell;
  o.size = size;
  o.price = limit;
  o.owner_class = TraderClass::LF;
  o.owner_id = trader.id;
  o.placed_at = ctx.session;
  o.expires_after = ctx.session + p.gamma_L - 1;
  return o;
}

double lf_profit(double close, double limit_price, double demand) noexcept { return (close - limit_price) * demand; }

double chartist_probability(double pi_c, double pi_f, double zeta) noexcept {
  return 1.0 / (1.0 + std::exp((pi_f - pi_c) / zeta));
}

Strategy switch_strategy(double pi_c, double pi_f, double zeta, Rng& rng) {
  const double phi_c = chartist_probability(pi_c, pi_f, zeta);
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  return u < phi_c ? Strategy::Chartist : Strategy::Fundamentalist;
}

void update_strategy(LFTrader& trader, double close, const LFParams& p, Rng& rng) {
  if (!trader.last_limit_price || !trader.last_demands) return;
  const double pi_c = lf_profit(close, *trader.last_limit_price, trader.last_demands->chartist);
  const double pi_f = lf_profit(close, *trader.last_limit_price, trader.last_demands->fundamentalist);
  trader.strategy = switch_strategy(pi_c, pi_f, p.zeta, rng);
}

}  // namespace hfabm
