#pragma once

#include "hfabm/orderbook.hpp"
#include "hfabm/types.hpp"

#include <optional>
#include <span>

namespace hfabm {

struct HFParams {
  double eta_min = 0.0;
  double eta_max = 0.2;
  double lambda = 0.625;
  double kappa_min = 0.0;
  double kappa_max = 0.01;
  Session gamma_H = 1;
  Volume position_cap = 3000;
  /// Orders may not exceed this fraction of the opposite side's volume.
  double book_fraction_cap = 0.25;
};

struct HFTrader {
  std::int64_t id = 0;
  double delta_x = 0.0;
  Volume net_position = 0;
  /// Unexecuted volume still resting in the book, by side. Counted against
  /// position headroom so that full execution cannot breach the cap.
  Volume resting_buy = 0;
  Volume resting_sell = 0;
};

/// |(close_prev - close_prev2) / close_prev2| > delta_x
bool hf_is_active(const HFTrader& trader, double close_prev, double close_prev2) noexcept;

Side hf_side(Rng& rng);

/// Remaining volume the trader may add on `side` without the position leaving
/// [-cap, cap] under full execution of everything it has resting.
Volume position_headroom(const HFTrader& trader, Side side, Volume cap) noexcept;

/// Applies the quarter-of-book and position caps to a raw size draw.
Volume clamp_hf_size(Volume draw, Volume opposite_volume, Volume headroom, double book_fraction_cap) noexcept;

/// Poisson(lambda * V) on the opposite side volume V, then clamped. Zero means no order.
Volume hf_order_size(Side side, const LimitOrderBook& book, const HFTrader& trader, const HFParams& p, Rng& rng);

/// Buy: ask * (1 + kappa); sell: bid * (1 - kappa); rounded to tick, at least one tick.
Ticks hf_price_from_quote(Side side, double quote, double kappa, double tick_size) noexcept;

/// Draws kappa ~ U[kappa_min, kappa_max]. Empty when the quote it needs is missing.
std::optional<Ticks> hf_limit_price(Side side, const LimitOrderBook& book, const HFParams& p, Rng& rng);

/// (close - limit) * signed size, positive size for buys.
double hf_profit(double close, double limit_price, double signed_size) noexcept;

/// Applies the trader's executed fills from a session's trades.
void update_position(HFTrader& trader, std::span<const Trade> trades);
/// Same as update_position for a whole population whose ids are their indices.
void apply_fills(std::span<HFTrader> traders, std::span<const Trade> trades);

}  // namespace hfabm
