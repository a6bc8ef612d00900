#include "hfabm/config.hpp"
#include "hfabm/lf_agents.hpp"
#include "hfabm/market_engine.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace hfabm;

TEST_CASE("activation schedule") {
  LFTrader t;
  t.theta_i = 20.0;
  schedule_next_activation(t, 7);
  CHECK(t.next_active_at == 27);
  CHECK_FALSE(lf_is_active(t, 26));
  CHECK(lf_is_active(t, 27));

  t.theta_i = 10.4;
  schedule_next_activation(t, 0);
  CHECK(t.next_active_at == 10);

  Config c;
  c.N_L = 200;
  c.N_H = 0;
  Rng rng(1);
  const auto state = init_state(c, rng);
  for (const auto& trader : state.lf) CHECK(lf_is_active(trader, 0));
}

TEST_CASE("truncated exponential activation periods") {
  Rng rng(11);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = sample_activation_period(20.0, 10.0, 40.0, rng);
    REQUIRE(x >= 10.0);
    REQUIRE(x <= 40.0);
    sum += x;
  }
  const double m1 = oracle::truncated_exponential_moment(20.0, 10.0, 40.0, 1);
  const double m2 = oracle::truncated_exponential_moment(20.0, 10.0, 40.0, 2);
  const double se = std::sqrt((m2 - m1 * m1) / n);
  CHECK(std::fabs(sum / n - m1) < 3.0 * se);
}

TEST_CASE("chartist demand") {
  CHECK(chartist_demand(110.0, 100.0, 0.04, 0.0) == doctest::Approx(0.4));
  CHECK(chartist_demand(100.0, 100.0, 0.04, 0.0) == 0.0);

  LFParams p;
  Rng rng(3);
  const int n = 100000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += chartist_demand(100.0, 100.0, p, rng);
  CHECK(std::fabs(sum / n) < 3.0 * p.sigma_c / std::sqrt(double(n)));
}

TEST_CASE("fundamentalist demand") {
  CHECK(fundamentalist_demand(75.0, 100.0, 0.04, 0.0) == doctest::Approx(-1.0));
  CHECK(fundamentalist_demand(100.0, 100.0, 0.04, 0.0) == 0.0);

  LFParams p;
  Rng rng(4);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = fundamentalist_demand(90.0, 100.0, p, rng);
    s += d;
    s2 += d * d;
  }
  const double var = (s2 - s * s / n) / (n - 1);
  CHECK(var == doctest::Approx(p.sigma_f * p.sigma_f).epsilon(0.05));
}

TEST_CASE("fundamental value walk") {
  CHECK(fundamental_step(100.0, 0.0001, 0.0) == doctest::Approx(100.01));

  LFParams p;
  p.sigma_y = 0.0;
  FundamentalTrack track{{100.0}};
  Rng rng(5);
  for (int i = 0; i < 100; ++i) evolve_fundamental(track, p, rng);
  CHECK(track.values.size() == 101);
  CHECK(track.current() == doctest::Approx(100.0 * std::pow(1.0001, 100)).epsilon(1e-12));

  LFParams q;
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    FundamentalTrack one{{100.0}};
    const double ratio = evolve_fundamental(one, q, rng) / 100.0;
    s += ratio;
    s2 += ratio * ratio;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - (1.0 + q.delta)) < 3.0 * se);
}

TEST_CASE("LF limit prices") {
  CHECK(lf_limit_price(100.0, 0.0001, 0.0, 0.01) == 10001);
  CHECK(lf_limit_price(100.0, 0.0, 0.01, 0.01) == 10100);

  LFParams p;
  Rng rng(6);
  const int n = 100000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double price = static_cast<double>(lf_limit_price(100.0, p, 0.01, rng)) * 0.01;
    s += price;
    s2 += price * price;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - 100.0 * (1.0 + p.delta)) < 3.0 * se);
}

TEST_CASE("demand to order") {
  CHECK(demand_to_size(0.4, 100.0) == 40);
  CHECK(demand_to_size(-0.004, 100.0) == 0);

  LFParams p;
  p.sigma_c = 0.0;
  p.sigma_z = 0.0;
  LFTrader t;
  t.id = 3;
  t.theta_i = 20.0;
  t.strategy = Strategy::Chartist;
  OrderId next = 10;
  Rng rng(7);
  const LFOrderContext ctx{110.0, 100.0, 100.0, 4, 0.01};
  const auto order = lf_order(t, ctx, p, next, rng);
  REQUIRE(order);
  CHECK(order->side == Side::Buy);
  CHECK(order->size == 40);
  CHECK(order->id == 10);
  CHECK(next == 11);
  CHECK(order->expires_after == 4 + p.gamma_L - 1);
  CHECK(t.next_active_at == 24);

  const LFOrderContext flat{100.0, 100.0, 100.0, 30, 0.01};
  t.strategy = Strategy::Chartist;
  CHECK_FALSE(lf_order(t, flat, p, next, rng));
  CHECK(next == 11);
}

TEST_CASE("LF profit") {
  CHECK(lf_profit(102.0, 100.0, 40.0) == doctest::Approx(80.0));
  CHECK(lf_profit(100.0, 100.0, 17.0) == 0.0);
  Rng rng(8);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double close = 100.0 + u(rng), limit = 100.0 + u(rng), d = u(rng);
    const double pi = lf_profit(close, limit, d);
    const double expected = (close - limit) * d;
    CHECK((pi > 0) == (expected > 0));
    CHECK((pi < 0) == (expected < 0));
  }
}

TEST_CASE("logit switching") {
  CHECK(chartist_probability(3.0, 3.0, 1.0) == doctest::Approx(0.5));
  CHECK(chartist_probability(2.0 + 0.5 * std::log(3.0), 2.0, 0.5) == doctest::Approx(0.75));

  struct Case {
    double pi_c, pi_f, zeta;
  };
  for (const Case c : {Case{0.3, 0.0, 1.0}, Case{-1.2, 0.4, 1.0}, Case{1.0, 1.0, 2.0}}) {
    const double phi = 1.0 / (1.0 + std::exp((c.pi_f - c.pi_c) / c.zeta));
    Rng rng(9);
    const int n = 100000;
    int chartists = 0;
    for (int i = 0; i < n; ++i) chartists += switch_strategy(c.pi_c, c.pi_f, c.zeta, rng) == Strategy::Chartist;
    const double se = std::sqrt(phi * (1.0 - phi) / n);
    CHECK(std::fabs(double(chartists) / n - phi) < 3.0 * se);
  }
}

TEST_CASE("strategy update uses both hypothetical profits") {
  LFParams p;
  p.zeta = 1e-6;  // effectively deterministic
  Rng rng(10);
  LFTrader t;
  update_strategy(t, 101.0, p, rng);  // nothing recorded: no-op
  CHECK(t.strategy == Strategy::Chartist);
  t.last_limit_price = 100.0;
  t.last_demands = Demands{-0.2, 0.3};  // price rose: fundamentalist buy wins
  update_strategy(t, 101.0, p, rng);
  CHECK(t.strategy == Strategy::Fundamentalist);
}
