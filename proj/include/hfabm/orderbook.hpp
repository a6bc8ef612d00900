#pragma once

#include "hfabm/types.hpp"

#include <array>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace hfabm {

struct Order {
  OrderId id = 0;
  Side side = Side::Buy;
  Volume size = 0;
  Ticks price = 0;
  TraderClass owner_class = TraderClass::LF;
  std::int64_t owner_id = 0;
  Session placed_at = 0;
  /// Last session the order may rest in the book.
  Session expires_after = 0;

  friend bool operator==(const Order&, const Order&) = default;
};

struct Trade {
  OrderId buy_order_id = 0;
  OrderId sell_order_id = 0;
  Volume size = 0;
  /// Midpoint of the two limit prices, in price units. May fall between ticks.
  double price = 0.0;
  Session session = 0;
  TraderClass buyer_class = TraderClass::LF;
  TraderClass seller_class = TraderClass::LF;
  std::int64_t buyer_id = 0;
  std::int64_t seller_id = 0;

  friend bool operator==(const Trade&, const Trade&) = default;
};

/// Rounds a positive price to the nearest tick, halves rounding up.
Ticks to_ticks(double price, double tick_size) noexcept;

/// Price-time priority book with batch matching.
///
/// Orders are not matched on insert; match_session() crosses the book once all
/// orders of a session are in. A book is owned by a single run: it may be moved
/// between threads but never mutated concurrently.
class LimitOrderBook {
 public:
  explicit LimitOrderBook(double tick_size = 0.01);

  /// Throws std::invalid_argument on duplicate id, non-positive size or price,
  /// or expiry before placement.
  void insert(const Order& order);

  /// Crosses the book: best bid against best ask while bid >= ask, trading the
  /// smaller remaining size at the midpoint of the two limits. Residuals keep
  /// their queue position.
  std::vector<Trade> match_session(Session session);

  /// Removes every order whose expires_after <= session.
  std::vector<Order> expire_orders(Session session);

  /// Removes a resting order. Returns false if the id is unknown.
  bool cancel(OrderId id);

  std::optional<Ticks> best_bid_ticks() const;
  std::optional<Ticks> best_ask_ticks() const;
  std::optional<double> best_bid() const;
  std::optional<double> best_ask() const;
  /// best_ask - best_bid; negative while a session's submissions are still unmatched.
  std::optional<double> bid_ask_spread() const;

  Volume side_volume(Side side, std::optional<TraderClass> owner = std::nullopt) const;

  bool contains(OrderId id) const { return index_.contains(id); }
  std::optional<Order> find(OrderId id) const;
  std::size_t size() const noexcept { return index_.size(); }
  bool empty() const noexcept { return index_.empty(); }
  double tick_size() const noexcept { return tick_size_; }
  double to_price(Ticks t) const noexcept { return static_cast<double>(t) * tick_size_; }

  /// Orders in queue priority order.
  std::vector<Order> bids() const;
  std::vector<Order> asks() const;

 private:
  struct Key {
    Ticks price;
    Session placed_at;
    OrderId id;
  };
  struct BidOrder {
    bool operator()(const Key& a, const Key& b) const noexcept {
      if (a.price != b.price) return a.price > b.price;
      if (a.placed_at != b.placed_at) return a.placed_at < b.placed_at;
      return a.id < b.id;
    }
  };
  struct AskOrder {
    bool operator()(const Key& a, const Key& b) const noexcept {
      if (a.price != b.price) return a.price < b.price;
      if (a.placed_at != b.placed_at) return a.placed_at < b.placed_at;
      return a.id < b.id;
    }
  };

  static Key key_of(const Order& o) noexcept { return {o.price, o.placed_at, o.id}; }
  void erase(const Order& o);
  void add_volume(const Order& o, Volume delta) noexcept;

  double tick_size_;
  std::map<Key, Order, BidOrder> bids_;
  std::map<Key, Order, AskOrder> asks_;
  std::unordered_map<OrderId, std::pair<Side, Key>> index_;
  std::map<Session, std::vector<OrderId>> expiry_;
  // [side][owner class]
  std::array<std::array<Volume, 2>, 2> volume_{};
};

void to_json(nlohmann::json& j, const Order& o);
void to_json(nlohmann::json& j, const Trade& t);
/// Debug snapshot: {"tick_size", "bids": [...], "asks": [...]}, queue order.
nlohmann::json snapshot(const LimitOrderBook& book);

}  // namespace hfabm
