#include "hfabm/analytics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace hfabm;
using namespace hfabm::analytics;

namespace {

// 100 for sessions 0..20, 94 at 21, then a straight line back to 100 over
// `recovery` sessions, flat afterwards.
std::vector<double> v_shape(int recovery, int tail = 40) {
  std::vector<double> c(21, 100.0);
  for (int k = 0; k <= recovery; ++k) c.push_back(94.0 + 6.0 * k / recovery);
  for (int k = 0; k < tail; ++k) c.push_back(100.0);
  return c;
}

RunRecord run_from(const std::vector<double>& closes) {
  RunRecord r;
  for (std::size_t t = 0; t < closes.size(); ++t) {
    SessionRecord s;
    s.session = static_cast<Session>(t);
    s.close = closes[t];
    r.sessions.push_back(s);
  }
  return r;
}

// Noisy flat market with one crash: a four-session slide and a four-session rebound.
std::vector<double> noisy_crash(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-0.002, 0.002);
  std::vector<double> c;
  for (int i = 0; i < 40; ++i) c.push_back(100.0 * (1.0 + u(rng)));
  for (double v : {96.0, 94.9, 93.5, 92.0, 94.0, 97.0, 99.0, 101.0}) c.push_back(v);
  for (int i = 0; i < 40; ++i) c.push_back(100.0 * (1.0 + u(rng)));
  return c;
}

}  // namespace

TEST_CASE("constant prices have no crashes") {
  const std::vector<double> flat(200, 50.0);
  const auto scan = detect_flash_crashes(flat);
  CHECK(scan.events.empty());
  CHECK(scan.labels.size() == 200);
  for (auto p : scan.labels) CHECK(p == Phase::NormalTimes);
}

TEST_CASE("a ten-session V is one crash") {
  const auto closes = v_shape(10);
  const auto scan = detect_flash_crashes(closes);
  REQUIRE(scan.events.size() == 1);
  const auto& e = scan.events[0];
  CHECK(e.onset == 21);
  CHECK(e.trough == 21);
  CHECK(e.recovery == 31);
  CHECK(e.duration == 10);
  CHECK(e.depth == doctest::Approx(0.06));
  CHECK(e.reference == 100.0);
  CHECK(scan.labels[20] == Phase::NormalTimes);
  CHECK(scan.labels[21] == Phase::Crash);
  for (int t = 22; t <= 31; ++t) CHECK(scan.labels[t] == Phase::Recovery);
  CHECK(scan.labels[32] == Phase::NormalTimes);
}

TEST_CASE("slow recoveries are not flash crashes") {
  const auto closes = v_shape(45, 10);
  const auto scan = detect_flash_crashes(closes);
  CHECK(scan.events.empty());
  for (auto p : scan.labels) CHECK(p == Phase::NormalTimes);
}

TEST_CASE("the trailing reference catches multi-session slides") {
  auto closes = noisy_crash(1);
  const auto scan = detect_flash_crashes(closes);
  REQUIRE(scan.events.size() == 1);
  CHECK(scan.events[0].onset == 41);
  CHECK(scan.events[0].trough == 43);
  CHECK(scan.events[0].recovery == 47);
}

TEST_CASE("volume equal to returns correlates perfectly in every phase") {
  auto run = run_from(noisy_crash(2));
  label_run(run, CrashParams{});
  const auto closes = run.closes();
  for (std::size_t t = 1; t < run.sessions.size(); ++t) {
    const double r = std::log(closes[t] / closes[t - 1]);
    const auto v = static_cast<Volume>(std::llround(1e9 * r + 1e8));
    run.sessions[t].hf_buy_vol = v;
    run.sessions[t].lf_sell_vol = v;
    run.sessions[t].hf_exec_vol = v;
    run.sessions[t].lf_exec_vol = v;
  }
  for (auto src : {VolumeSource::Submitted, VolumeSource::Executed}) {
    const auto c = run_correlations(run, src);
    for (std::size_t ci = 0; ci < 3; ++ci)
      for (std::size_t vi = 0; vi < 3; ++vi) {
        REQUIRE(c.cell[ci][vi]);
        CHECK(*c.cell[ci][vi] == doctest::Approx(1.0).epsilon(1e-6));
      }
  }
}

TEST_CASE("independent volumes are uncorrelated") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> r(0.0, 0.003);
  std::uniform_int_distribution<Volume> vol(0, 1000);
  std::vector<double> closes{100.0};
  for (int i = 0; i < 20000; ++i) closes.push_back(closes.back() * std::exp(r(rng)));
  auto run = run_from(closes);
  for (auto& s : run.sessions) {
    s.phase = Phase::NormalTimes;
    s.hf_buy_vol = vol(rng);
    s.lf_buy_vol = vol(rng);
  }
  const auto c = run_correlations(run, VolumeSource::Submitted);
  CHECK(std::fabs(*c.cell[0][1]) < 3.0 / std::sqrt(20000.0));
  CHECK(std::fabs(*c.cell[0][2]) < 3.0 / std::sqrt(20000.0));
  CHECK_FALSE(c.cell[1][0]);
}

TEST_CASE("cross-run correlation table") {
  std::vector<RunRecord> runs;
  for (std::uint64_t s = 0; s < 4; ++s) {
    auto run = run_from(noisy_crash(10 + s));
    label_run(run, CrashParams{});
    std::mt19937_64 rng(s);
    std::uniform_int_distribution<Volume> vol(1, 100);
    for (auto& x : run.sessions) x.hf_sell_vol = vol(rng);
    runs.push_back(run);
  }
  const auto table = conditional_correlations(runs, VolumeSource::Submitted);
  REQUIRE(table.per_run.size() == 4);
  REQUIRE(table.cell[0][1]);
  double sum = 0.0;
  for (const auto& r : table.per_run) sum += *r.cell[0][1];
  CHECK(table.cell[0][1]->mean == doctest::Approx(sum / 4));
  CHECK(table.cell[0][1]->n == 4);
  CHECK_FALSE(table.cell[0][2]);  // no LF volume at all
}

TEST_CASE("sell concentration") {
  SessionRecord s;
  s.hf_sell_vol = 60;
  s.hf_buy_vol = 40;
  CHECK(*sell_concentration(s, TraderClass::HF) == doctest::Approx(0.6));
  s.lf_buy_vol = 17;
  CHECK(*sell_concentration(s, TraderClass::LF) == 0.0);
  SessionRecord empty;
  CHECK_FALSE(sell_concentration(empty, TraderClass::LF));
}

TEST_CASE("per-phase curves") {
  auto run = run_from(noisy_crash(5));
  label_run(run, CrashParams{});
  for (auto& s : run.sessions) {
    s.spread_end = s.phase == Phase::Crash ? 0.5 : 0.1;
    s.hf_sell_vol = s.phase == Phase::Crash ? 9 : 1;
    s.hf_buy_vol = 1;
  }
  const std::vector<RunRecord> runs{run};
  const auto sp = spread_distribution_by_phase(runs);
  CHECK(sp.grid.size() == 201);
  CHECK(sp.samples[1].size() == 3);
  CHECK(min_margin(sp.kernel[1], sp.kernel[0]) >= 0.0);
  CHECK(min_margin(sp.empirical[1], sp.empirical[0]) >= 0.0);

  const auto conc = sell_concentration_ratio(runs, TraderClass::HF);
  CHECK(conc.grid.size() == 101);
  CHECK(conc.grid.front() == 0.0);
  CHECK(conc.grid.back() == 1.0);
  for (double v : conc.samples[1]) CHECK(v == doctest::Approx(0.9));
  CHECK(sup_distance(conc.kernel[2], conc.kernel[0]) <= 1e-12);
}

TEST_CASE("volatility") {
  const std::vector<double> flat(10, 0.0);
  CHECK(volatility(flat) == 0.0);
  std::vector<double> alt;
  for (int i = 0; i < 1000; ++i) alt.push_back(i % 2 ? -0.01 : 0.01);
  CHECK(volatility(alt) == doctest::Approx(0.01).epsilon(0.001));
}

TEST_CASE("summary over runs") {
  std::vector<RunRecord> runs{run_from(v_shape(10)), run_from(std::vector<double>(80, 100.0))};
  const auto s = summarize(runs, CrashParams{});
  CHECK(s.runs == 2);
  CHECK(s.crash_count.mean == doctest::Approx(0.5));
  CHECK(s.mean_duration.n == 1);
  CHECK(s.mean_duration.mean == doctest::Approx(10.0));
  CHECK(s.per_run[1].sigma_p == 0.0);
  CHECK(runs[0].sessions[21].phase == Phase::Crash);
}

TEST_CASE("ACF battery averages runs") {
  std::vector<RunRecord> runs;
  std::mt19937_64 rng(8);
  std::normal_distribution<double> r(0.0, 0.01);
  for (int k = 0; k < 3; ++k) {
    std::vector<double> c{100.0};
    for (int i = 0; i < 999; ++i) c.push_back(c.back() * std::exp(r(rng)));
    runs.push_back(run_from(c));
  }
  const auto b = acf_battery(runs, 20);
  CHECK(b.max_lag == 20);
  CHECK(b.per_run.size() == 3);
  CHECK(b.mean.returns.size() == 20);
  CHECK(b.mean.returns[4] ==
        doctest::Approx((b.per_run[0].returns[4] + b.per_run[1].returns[4] + b.per_run[2].returns[4]) / 3));
  CHECK(b.inside_band() >= 18);
}
