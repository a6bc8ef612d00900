#include "hfabm/market_engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <set>
#include <stdexcept>
#include <thread>

namespace hfabm {

namespace {

void mark(const RunOptions& opts, Stage s) {
  if (opts.trace) opts.trace->push_back(s);
}

struct HfSubmission {
  double limit_price;
  double signed_size;
};

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void summarize_profits(std::span<const double> profits, AgentSummary& s) {
  s.hf_profit_count = static_cast<std::int64_t>(profits.size());
  if (profits.empty()) return;
  const double n = static_cast<double>(profits.size());
  const double mean = std::accumulate(profits.begin(), profits.end(), 0.0) / n;
  double m2 = 0.0, m3 = 0.0;
  for (double x : profits) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= n;
  m3 /= n;
  s.hf_profit_mean = mean;
  s.hf_profit_sd = std::sqrt(m2);
  s.hf_profit_skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
}

}  // namespace

std::string_view to_string(Phase p) noexcept {
  switch (p) {
    case Phase::NormalTimes: return "normal";
    case Phase::Crash: return "crash";
    case Phase::Recovery: return "recovery";
    case Phase::Unlabeled: break;
  }
  return "unlabeled";
}

std::vector<double> RunRecord::closes() const {
  std::vector<double> out;
  out.reserve(sessions.size());
  for (const auto& s : sessions) out.push_back(s.close);
  return out;
}

double MarketState::close_back(std::size_t k) const {
  return closes.size() >= k ? closes[closes.size() - k] : initial_price;
}

MarketState init_state(const Config& config, Rng& rng) {
  validate(config);
  MarketState s;
  s.config = config;
  s.initial_price = config.initial_price;
  s.book = LimitOrderBook(config.tick_size);
  s.fundamental.values.push_back(config.initial_price);
  s.closes.reserve(static_cast<std::size_t>(config.T));

  s.lf.resize(static_cast<std::size_t>(config.N_L));
  for (std::size_t i = 0; i < s.lf.size(); ++i) {
    auto& tr = s.lf[i];
    tr.id = static_cast<std::int64_t>(i);
    tr.theta_i = sample_activation_period(config.theta, config.theta_min, config.theta_max, rng);
  }
  std::bernoulli_distribution coin(0.5);
  for (auto& tr : s.lf) tr.strategy = coin(rng) ? Strategy::Chartist : Strategy::Fundamentalist;

  std::uniform_real_distribution<double> threshold(config.eta_min, config.eta_max);
  s.hf.resize(static_cast<std::size_t>(config.N_H));
  for (std::size_t j = 0; j < s.hf.size(); ++j) {
    s.hf[j].id = static_cast<std::int64_t>(j);
    s.hf[j].delta_x = threshold(rng);
  }
  return s;
}

double closing_price(std::span<const Trade> trades, double previous_close) noexcept {
  if (trades.empty()) return previous_close;
  double best = trades.front().price;
  for (const auto& t : trades) best = std::max(best, t.price);
  return best;
}

SessionRecord run_session(MarketState& state, Rng& rng, const RunOptions& opts) {
  const Config& cfg = state.config;
  const LFParams lfp = cfg.lf_params();
  const HFParams hfp = cfg.hf_params();
  const Session t = state.session;
  const double close_prev = state.close_back(1);
  const double close_prev2 = state.close_back(2);

  SessionRecord rec;
  rec.session = t;

  mark(opts, Stage::Fundamental);
  rec.fundamental = evolve_fundamental(state.fundamental, lfp, rng);

  mark(opts, Stage::LfSubmit);
  std::vector<std::size_t> active_lf;
  const LFOrderContext ctx{close_prev, close_prev2, rec.fundamental, t, cfg.tick_size};
  for (std::size_t i = 0; i < state.lf.size(); ++i) {
    LFTrader& tr = state.lf[i];
    if (!lf_is_active(tr, t)) continue;
    active_lf.push_back(i);
    if (auto order = lf_order(tr, ctx, lfp, state.next_order_id, rng)) {
      state.book.insert(*order);
      ++state.lf_orders;
      (order->side == Side::Buy ? rec.lf_buy_vol : rec.lf_sell_vol) += order->size;
    }
  }
  const bool sequential = cfg.hf_sequential_execution != 0;
  std::vector<Trade> trades;
  if (sequential) trades = state.book.match_session(t);
  rec.spread_pre_match = state.book.bid_ask_spread();

  mark(opts, Stage::HfSubmit);
  std::vector<HfSubmission> hf_orders;
  if (t >= 2 && !state.hf.empty()) {
    std::vector<std::size_t> active_hf;
    for (std::size_t j = 0; j < state.hf.size(); ++j)
      if (hf_is_active(state.hf[j], close_prev, close_prev2)) active_hf.push_back(j);
    rec.hf_active = static_cast<int>(active_hf.size());
    std::shuffle(active_hf.begin(), active_hf.end(), rng);

    for (std::size_t j : active_hf) {
      HFTrader& tr = state.hf[j];
      const Side side = hf_side(rng);
      const Volume size = hf_order_size(side, state.book, tr, hfp, rng);
      if (size == 0) continue;
      const auto price = hf_limit_price(side, state.book, hfp, rng);
      if (!price) continue;

      Order o;
      o.id = state.next_order_id++;
      o.side = side;
      o.size = size;
      o.price = *price;
      o.owner_class = TraderClass::HF;
      o.owner_id = tr.id;
      o.placed_at = t;
      o.expires_after = t + hfp.gamma_H - 1;
      state.book.insert(o);
      if (sequential) {
        auto fills = state.book.match_session(t);
        trades.insert(trades.end(), fills.begin(), fills.end());
      }

      if (side == Side::Buy) {
        tr.resting_buy += size;
        rec.hf_buy_vol += size;
      } else {
        tr.resting_sell += size;
        rec.hf_sell_vol += size;
      }
      const double signed_size = side == Side::Buy ? static_cast<double>(size) : -static_cast<double>(size);
      hf_orders.push_back({state.book.to_price(*price), signed_size});
    }
  }

  mark(opts, Stage::Match);
  {
    auto rest = state.book.match_session(t);
    trades.insert(trades.end(), rest.begin(), rest.end());
  }
  rec.n_trades = static_cast<std::int64_t>(trades.size());
  for (const Trade& tr : trades) {
    (tr.buyer_class == TraderClass::LF ? rec.lf_exec_vol : rec.hf_exec_vol) += tr.size;
    (tr.seller_class == TraderClass::LF ? rec.lf_exec_vol : rec.hf_exec_vol) += tr.size;
  }

  mark(opts, Stage::Close);
  rec.close = closing_price(trades, close_prev);
  state.closes.push_back(rec.close);

  mark(opts, Stage::Update);
  for (std::size_t i : active_lf) update_strategy(state.lf[i], rec.close, lfp, rng);
  apply_fills(state.hf, trades);

  mark(opts, Stage::Expire);
  for (const Order& o : state.book.expire_orders(t)) {
    if (o.owner_class != TraderClass::HF) continue;
    auto& h = state.hf[static_cast<std::size_t>(o.owner_id)];
    (o.side == Side::Buy ? h.resting_buy : h.resting_sell) -= o.size;
  }
  rec.spread_end = state.book.bid_ask_spread();

  for (const auto& h : hf_orders) state.hf_profits.push_back(hf_profit(rec.close, h.limit_price, h.signed_size));

  if (opts.keep_trades) rec.trades = std::move(trades);
  ++state.session;
  return rec;
}

RunRecord run_simulation(const Config& config, std::uint64_t seed, std::string scenario, const RunOptions& opts) {
  Rng rng(seed);
  MarketState state = init_state(config, rng);

  RunRecord run;
  run.seed = seed;
  run.scenario = std::move(scenario);
  run.sessions.reserve(static_cast<std::size_t>(config.T));

  AgentSummary& s = run.summary;
  for (Session t = 0; t < config.T; ++t) {
    SessionRecord rec = run_session(state, rng, opts);
    if (rec.hf_active > 0) ++s.hf_active_sessions;
    for (const auto& h : state.hf) s.max_abs_position = std::max(s.max_abs_position, std::abs(h.net_position));
    run.sessions.push_back(std::move(rec));
  }

  if (!state.lf.empty()) {
    double sum = 0.0;
    s.theta_min = state.lf.front().theta_i;
    s.theta_max = state.lf.front().theta_i;
    std::size_t chartists = 0;
    for (const auto& tr : state.lf) {
      sum += tr.theta_i;
      s.theta_min = std::min(s.theta_min, tr.theta_i);
      s.theta_max = std::max(s.theta_max, tr.theta_i);
      if (tr.strategy == Strategy::Chartist) ++chartists;
    }
    s.theta_mean = sum / static_cast<double>(state.lf.size());
    s.final_chartist_share = static_cast<double>(chartists) / static_cast<double>(state.lf.size());
  }
  if (!state.hf.empty()) {
    s.delta_x_min = state.hf.front().delta_x;
    s.delta_x_max = state.hf.front().delta_x;
    for (const auto& h : state.hf) {
      s.delta_x_min = std::min(s.delta_x_min, h.delta_x);
      s.delta_x_max = std::max(s.delta_x_max, h.delta_x);
    }
  }
  summarize_profits(state.hf_profits, s);
  s.lf_orders = state.lf_orders;
  s.hf_orders = static_cast<std::int64_t>(state.hf_profits.size());
  return run;
}

std::vector<RunRecord> run_monte_carlo(const Config& config, std::span<const std::uint64_t> seeds,
                                       std::string scenario, unsigned threads, const RunCallback& on_done) {
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
    throw std::invalid_argument("run_monte_carlo: seeds must be distinct");
  validate(config);

  std::vector<RunRecord> out(seeds.size());
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(seeds.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::mutex report_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= seeds.size() || failed.load()) return;
      try {
        out[i] = run_simulation(config, seeds[i], scenario);
        if (on_done) {
          std::lock_guard lock(report_mutex);
          on_done(i, out[i]);
        }
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<std::uint64_t> derive_seeds(std::uint64_t master_seed, std::size_t count) {
  std::vector<std::uint64_t> seeds;
  std::set<std::uint64_t> seen;
  std::uint64_t state = master_seed;
  while (seeds.size() < count) {
    const std::uint64_t s = splitmix64(state);
    if (seen.insert(s).second) seeds.push_back(s);
  }
  return seeds;
}

}  // namespace hfabm
