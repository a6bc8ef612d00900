#include "hfabm/hf_agents.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <array>
#include <cmath>

using namespace hfabm;

TEST_CASE("event-time activation") {
  HFTrader t;
  for (double dx : {0.0, 0.05, 0.1999, 0.2}) {
    t.delta_x = dx;
    CHECK(hf_is_active(t, 125.0, 100.0));
    CHECK(hf_is_active(t, 75.0, 100.0));
  }
  t.delta_x = 0.0;
  CHECK_FALSE(hf_is_active(t, 100.0, 100.0));

  Rng rng(1);
  std::uniform_real_distribution<double> threshold(0.0, 0.2);
  const int n = 100000;
  int active = 0;
  for (int i = 0; i < n; ++i) {
    t.delta_x = threshold(rng);
    active += hf_is_active(t, 110.0, 100.0);
  }
  CHECK(std::fabs(double(active) / n - 0.5) < 3.0 * std::sqrt(0.25 / n));
}

TEST_CASE("order side is a fair coin") {
  Rng rng(2);
  const int n = 100000;
  int buys = 0;
  double sxy = 0.0, sx = 0.0, sy = 0.0;
  for (int i = 0; i < n; ++i) {
    const double a = hf_side(rng) == Side::Buy ? 1.0 : 0.0;
    const double b = hf_side(rng) == Side::Buy ? 1.0 : 0.0;
    buys += static_cast<int>(a);
    sx += a;
    sy += b;
    sxy += a * b;
  }
  CHECK(std::fabs(double(buys) / n - 0.5) < 0.005);
  const double cov = sxy / n - (sx / n) * (sy / n);
  const double corr = cov / 0.25;
  CHECK(std::fabs(corr) < 3.0 / std::sqrt(double(n)));

  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) REQUIRE(hf_side(a) == hf_side(b));
}

TEST_CASE("seller counts among four traders are Binomial(4, 1/2)") {
  Rng rng(3);
  const int sessions = 100000;
  std::array<int, 5> counts{};
  for (int s = 0; s < sessions; ++s) {
    int sellers = 0;
    for (int j = 0; j < 4; ++j) sellers += hf_side(rng) == Side::Sell;
    ++counts[sellers];
  }
  double chi2 = 0.0;
  for (int k = 0; k <= 4; ++k) {
    const double expected = sessions * oracle::binomial_pmf(4, k, 0.5);
    chi2 += (counts[k] - expected) * (counts[k] - expected) / expected;
  }
  CHECK(chi2 < oracle::kChiSquare4At1Percent);
}

TEST_CASE("order size caps") {
  CHECK(clamp_hf_size(700, 1000, 3000, 0.25) == 250);
  CHECK(clamp_hf_size(100, 1000, 10, 0.25) == 10);
  CHECK(clamp_hf_size(5, 0, 3000, 0.25) == 0);

  HFTrader t;
  t.net_position = 2990;
  CHECK(position_headroom(t, Side::Buy, 3000) == 10);
  CHECK(position_headroom(t, Side::Sell, 3000) == 5990);
  t.resting_buy = 4;
  CHECK(position_headroom(t, Side::Buy, 3000) == 6);

  HFParams p;
  LimitOrderBook empty;
  Rng rng(4);
  CHECK(hf_order_size(Side::Buy, empty, HFTrader{}, p, rng) == 0);

  LimitOrderBook book;
  Order ask;
  ask.id = 1;
  ask.side = Side::Sell;
  ask.size = 1000;
  ask.price = 10000;
  ask.expires_after = 10;
  book.insert(ask);
  for (int i = 0; i < 200; ++i) {
    const Volume v = hf_order_size(Side::Buy, book, HFTrader{}, p, rng);
    CHECK(v <= 250);
    CHECK(v >= 0);
  }
  HFTrader full;
  full.net_position = 3000;
  CHECK(hf_order_size(Side::Buy, book, full, p, rng) == 0);
}

TEST_CASE("limit prices straddle the opposite quote") {
  CHECK(hf_price_from_quote(Side::Buy, 100.0, 0.005, 0.01) == 10050);
  CHECK(hf_price_from_quote(Side::Buy, 100.0, 0.0, 0.01) == 10000);
  CHECK(hf_price_from_quote(Side::Sell, 100.0, 0.005, 0.01) == 9950);

  LimitOrderBook book;
  Order bid, ask;
  bid.id = 1;
  bid.side = Side::Buy;
  bid.size = 10;
  bid.price = 9990;
  bid.expires_after = 5;
  ask = bid;
  ask.id = 2;
  ask.side = Side::Sell;
  ask.price = 10012;
  book.insert(bid);
  book.insert(ask);
  HFParams p;
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    CHECK(*hf_limit_price(Side::Buy, book, p, rng) >= 10012);
    CHECK(*hf_limit_price(Side::Sell, book, p, rng) <= 9990);
  }
  LimitOrderBook bids_only;
  bids_only.insert(bid);
  CHECK_FALSE(hf_limit_price(Side::Buy, bids_only, p, rng));
}

TEST_CASE("HF profit and positions") {
  CHECK(hf_profit(101.0, 100.0, 200.0) == doctest::Approx(200.0));
  CHECK(hf_profit(100.0, 100.0, -50.0) == 0.0);

  HFTrader t;
  t.id = 2;
  t.resting_buy = 40;
  Trade buy;
  buy.buyer_class = TraderClass::HF;
  buy.buyer_id = 2;
  buy.seller_class = TraderClass::LF;
  buy.seller_id = 2;
  buy.size = 40;
  update_position(t, std::span(&buy, 1));
  CHECK(t.net_position == 40);
  CHECK(t.resting_buy == 0);

  t.resting_sell = 15;
  Trade sell;
  sell.seller_class = TraderClass::HF;
  sell.seller_id = 2;
  sell.buyer_class = TraderClass::LF;
  sell.size = 15;
  update_position(t, std::span(&sell, 1));
  CHECK(t.net_position == 25);
  CHECK(t.resting_sell == 0);
}
