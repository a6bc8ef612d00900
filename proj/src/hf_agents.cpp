#include "hfabm/hf_agents.hpp"

#include <algorithm>
#include <cmath>

namespace hfabm {

bool hf_is_active(const HFTrader& trader, double close_prev, double close_prev2) noexcept {
  return std::abs((close_prev - close_prev2) / close_prev2) > trader.delta_x;
}

Side hf_side(Rng& rng) { return std::bernoulli_distribution(0.5)(rng) ? Side::Buy : Side::Sell; }

Volume position_headroom(const HFTrader& trader, Side side, Volume cap) noexcept {
  const Volume h = side == Side::Buy ? cap - trader.net_position - trader.resting_buy
                                     : cap + trader.net_position - trader.resting_sell;
  return std::max<Volume>(h, 0);
}

Volume clamp_hf_size(Volume draw, Volume opposite_volume, Volume headroom, double book_fraction_cap) noexcept {
  const auto book_cap = static_cast<Volume>(std::floor(static_cast<double>(opposite_volume) * book_fraction_cap));
  return std::max<Volume>(0, std::min({draw, book_cap, headroom}));
}

Volume hf_order_size(Side side, const LimitOrderBook& book, const HFTrader& trader, const HFParams& p, Rng& rng) {
  const Volume v = book.side_volume(opposite(side));
  if (v <= 0) return 0;
  const double mean = p.lambda * static_cast<double>(v);
  const auto draw = static_cast<Volume>(std::poisson_distribution<long long>(mean)(rng));
  return clamp_hf_size(draw, v, position_headroom(trader, side, p.position_cap), p.book_fraction_cap);
}

Ticks hf_price_from_quote(Side side, double quote, double kappa, double tick_size) noexcept {
  const double raw = side == Side::Buy ? quote * (1.0 + kappa) : quote * (1.0 - kappa);
  return std::max<Ticks>(1, to_ticks(raw, tick_size));
}

std::optional<Ticks> hf_limit_price(Side side, const LimitOrderBook& book, const HFParams& p, Rng& rng) {
  const auto quote = side == Side::Buy ? book.best_ask() : book.best_bid();
  if (!quote) return std::nullopt;
  const double kappa = std::uniform_real_distribution<double>(p.kappa_min, p.kappa_max)(rng);
  return hf_price_from_quote(side, *quote, kappa, book.tick_size());
}

double hf_profit(double close, double limit_price, double signed_size) noexcept {
  return (close - limit_price) * signed_size;
}

void update_position(HFTrader& trader, std::span<const Trade> trades) {
  for (const Trade& t : trades) {
    if (t.buyer_class == TraderClass::HF && t.buyer_id == trader.id) {
      trader.net_position += t.size;
      trader.resting_buy -= t.size;
    }
    if (t.seller_class == TraderClass::HF && t.seller_id == trader.id) {
      trader.net_position -= t.size;
      trader.resting_sell -= t.size;
    }
  }
}

void apply_fills(std::span<HFTrader> traders, std::span<const Trade> trades) {
  for (const Trade& t : trades) {
    if (t.buyer_class == TraderClass::HF) {
      auto& h = traders[static_cast<std::size_t>(t.buyer_id)];
      h.net_position += t.size;
      h.resting_buy -= t.size;
    }
    if (t.seller_class == TraderClass::HF) {
      auto& h = traders[static_cast<std::size_t>(t.seller_id)];
      h.net_position -= t.size;
      h.resting_sell -= t.size;
    }
  }
}

}  // namespace hfabm
