#include "hfabm/orderbook.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

namespace hfabm {

namespace {

constexpr std::size_t idx(Side s) noexcept { return s == Side::Buy ? 0 : 1; }
constexpr std::size_t idx(TraderClass c) noexcept { return c == TraderClass::LF ? 0 : 1; }

}  // namespace

Ticks to_ticks(double price, double tick_size) noexcept {
  // The nudge keeps decimal halves such as 100.005 from rounding down after
  // binary representation error.
  return static_cast<Ticks>(std::floor(price / tick_size + 0.5 + 1e-9));
}

LimitOrderBook::LimitOrderBook(double tick_size) : tick_size_(tick_size) {
  if (!(tick_size > 0.0)) throw std::invalid_argument("tick_size must be positive");
}

void LimitOrderBook::insert(const Order& order) {
  if (order.size < 1) throw std::invalid_argument("order " + std::to_string(order.id) + ": size must be >= 1");
  if (order.price < 1) throw std::invalid_argument("order " + std::to_string(order.id) + ": price must be positive");
  if (order.expires_after < order.placed_at)
    throw std::invalid_argument("order " + std::to_string(order.id) + ": expires before placement");
  if (index_.contains(order.id)) throw std::invalid_argument("duplicate order id " + std::to_string(order.id));

  const Key k = key_of(order);
  if (order.side == Side::Buy)
    bids_.emplace(k, order);
  else
    asks_.emplace(k, order);
  index_.emplace(order.id, std::pair{order.side, k});
  expiry_[order.expires_after].push_back(order.id);
  add_volume(order, order.size);
}

void LimitOrderBook::add_volume(const Order& o, Volume delta) noexcept {
  volume_[idx(o.side)][idx(o.owner_class)] += delta;
}

void LimitOrderBook::erase(const Order& o) {
  add_volume(o, -o.size);
  index_.erase(o.id);
  if (o.side == Side::Buy)
    bids_.erase(key_of(o));
  else
    asks_.erase(key_of(o));
}

std::vector<Trade> LimitOrderBook::match_session(Session session) {
  std::vector<Trade> trades;
  while (!bids_.empty() && !asks_.empty()) {
    auto b = bids_.begin();
    auto a = asks_.begin();
    Order& bid = b->second;
    Order& ask = a->second;
    if (bid.price < ask.price) break;

    Trade t;
    t.buy_order_id = bid.id;
    t.sell_order_id = ask.id;
    t.size = std::min(bid.size, ask.size);
    t.price = static_cast<double>(bid.price + ask.price) * tick_size_ / 2.0;
    t.session = session;
    t.buyer_class = bid.owner_class;
    t.seller_class = ask.owner_class;
    t.buyer_id = bid.owner_id;
    t.seller_id = ask.owner_id;
    trades.push_back(t);

    bid.size -= t.size;
    ask.size -= t.size;
    add_volume(bid, -t.size);
    add_volume(ask, -t.size);
    if (bid.size == 0) {
      index_.erase(bid.id);
      bids_.erase(b);
    }
    if (ask.size == 0) {
      index_.erase(ask.id);
      asks_.erase(a);
    }
  }
  return trades;
}

std::vector<Order> LimitOrderBook::expire_orders(Session session) {
  std::vector<Order> removed;
  auto end = expiry_.upper_bound(session);
  for (auto it = expiry_.begin(); it != end; ++it) {
    for (OrderId id : it->second) {
      auto found = index_.find(id);
      if (found == index_.end()) continue;  // already filled or cancelled
      const auto [side, key] = found->second;
      const Order o = side == Side::Buy ? bids_.at(key) : asks_.at(key);
      erase(o);
      removed.push_back(o);
    }
  }
  expiry_.erase(expiry_.begin(), end);
  return removed;
}

bool LimitOrderBook::cancel(OrderId id) {
  auto found = index_.find(id);
  if (found == index_.end()) return false;
  const auto [side, key] = found->second;
  const Order o = side == Side::Buy ? bids_.at(key) : asks_.at(key);
  erase(o);
  return true;
}

std::optional<Ticks> LimitOrderBook::best_bid_ticks() const {
  if (bids_.empty()) return std::nullopt;
  return bids_.begin()->first.price;
}

std::optional<Ticks> LimitOrderBook::best_ask_ticks() const {
  if (asks_.empty()) return std::nullopt;
  return asks_.begin()->first.price;
}

std::optional<double> LimitOrderBook::best_bid() const {
  if (auto t = best_bid_ticks()) return to_price(*t);
  return std::nullopt;
}

std::optional<double> LimitOrderBook::best_ask() const {
  if (auto t = best_ask_ticks()) return to_price(*t);
  return std::nullopt;
}

std::optional<double> LimitOrderBook::bid_ask_spread() const {
  auto b = best_bid_ticks();
  auto a = best_ask_ticks();
  if (!b || !a) return std::nullopt;
  return to_price(*a - *b);
}

Volume LimitOrderBook::side_volume(Side side, std::optional<TraderClass> owner) const {
  const auto& v = volume_[idx(side)];
  if (owner) return v[idx(*owner)];
  return v[0] + v[1];
}

std::optional<Order> LimitOrderBook::find(OrderId id) const {
  auto found = index_.find(id);
  if (found == index_.end()) return std::nullopt;
  const auto [side, key] = found->second;
  return side == Side::Buy ? bids_.at(key) : asks_.at(key);
}

std::vector<Order> LimitOrderBook::bids() const {
  std::vector<Order> out;
  out.reserve(bids_.size());
  for (const auto& [k, o] : bids_) out.push_back(o);
  return out;
}

std::vector<Order> LimitOrderBook::asks() const {
  std::vector<Order> out;
  out.reserve(asks_.size());
  for (const auto& [k, o] : asks_) out.push_back(o);
  return out;
}

void to_json(nlohmann::json& j, const Order& o) {
  j = nlohmann::json{{"id", o.id},
                     {"side", to_string(o.side)},
                     {"size", o.size},
                     {"price_ticks", o.price},
                     {"owner_class", to_string(o.owner_class)},
                     {"owner_id", o.owner_id},
                     {"placed_at", o.placed_at},
                     {"expires_after", o.expires_after}};
}

void to_json(nlohmann::json& j, const Trade& t) {
  j = nlohmann::json{{"buy_order_id", t.buy_order_id}, {"sell_order_id", t.sell_order_id},
                     {"size", t.size},                 {"price", t.price},
                     {"session", t.session},           {"buyer_class", to_string(t.buyer_class)},
                     {"seller_class", to_string(t.seller_class)}};
}

nlohmann::json snapshot(const LimitOrderBook& book) {
  auto dump = [&](const std::vector<Order>& side) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& o : side) {
      nlohmann::json j = o;
      j["price"] = book.to_price(o.price);
      arr.push_back(std::move(j));
    }
    return arr;
  };
  return {{"tick_size", book.tick_size()}, {"bids", dump(book.bids())}, {"asks", dump(book.asks())}};
}

}  // namespace hfabm
