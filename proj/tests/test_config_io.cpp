#include "hfabm/config.hpp"
#include "hfabm/io.hpp"
#include "hfabm/market_engine.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <cmath>
#include <filesystem>
#include <limits>

using namespace hfabm;
namespace fs = std::filesystem;

TEST_CASE("empty config gives the baseline parameters") {
  const Config c = parse_config("");
  CHECK(c.MC == 50);
  CHECK(c.T == 1200);
  CHECK(c.N_L == 10000);
  CHECK(c.N_H == 100);
  CHECK(c.theta == 20.0);
  CHECK(c.theta_min == 10.0);
  CHECK(c.theta_max == 40.0);
  CHECK(c.alpha_c == 0.04);
  CHECK(c.sigma_c == 0.05);
  CHECK(c.alpha_f == 0.04);
  CHECK(c.sigma_f == 0.01);
  CHECK(c.sigma_y == 0.01);
  CHECK(c.delta == 0.0001);
  CHECK(c.sigma_z == 0.01);
  CHECK(c.zeta == 1.0);
  CHECK(c.gamma_L == 20);
  CHECK(c.gamma_H == 1);
  CHECK(c.eta_min == 0.0);
  CHECK(c.eta_max == 0.2);
  CHECK(c.lambda == 0.625);
  CHECK(c.kappa_min == 0.0);
  CHECK(c.kappa_max == 0.01);
  CHECK(c.crash_threshold == 0.05);
  CHECK(c.recovery_window == 30);
  CHECK(c.reference_window == 30);
}

TEST_CASE("overrides and comments") {
  Config c = parse_config("gamma_H = 5\n");
  Config want;
  want.gamma_H = 5;
  CHECK(c == want);
  c = parse_config("# only LF traders\n  N_H=0   # none\n\nlambda = 0.5\n");
  CHECK(c.N_H == 0);
  CHECK(c.lambda == 0.5);
  CHECK(is_config_key("sigma_y"));
  CHECK_FALSE(is_config_key("sigma_q"));
}

TEST_CASE("config errors are collected") {
  try {
    parse_config("eta_max = -1\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    REQUIRE(e.problems().size() == 1);
    CHECK(e.problems()[0].find("eta_max") != std::string::npos);
  }
  try {
    parse_config("bogus = 1\nN_L = ten\nT = 1.5\nzeta\nlambda = 2\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const auto& p = e.problems();
    CHECK(p.size() == 5);
    const std::string all = e.what();
    CHECK(all.find("bogus") != std::string::npos);
    CHECK(all.find("N_L") != std::string::npos);
    CHECK(all.find("line 3") != std::string::npos);
    CHECK(all.find("line 4") != std::string::npos);
    CHECK(all.find("lambda") != std::string::npos);
  }
  Config c;
  CHECK_THROWS_AS(set_config_value(c, "nope", "1"), ConfigError);
  set_config_value(c, "gamma_L", "7");
  CHECK(c.gamma_L == 7);
}

TEST_CASE("canonical config text round-trips") {
  Config c;
  c.gamma_H = 15;
  c.sigma_y = 0.0123456789012345;
  c.delta = 1e-7;
  c.master_seed = 18446744073709551615ull;
  c.hf_sequential_execution = 0;
  CHECK(parse_config(format_config(c)) == c);
  CHECK(parse_config(format_config(Config{})) == Config{});
}

TEST_CASE("number formatting") {
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(io::format_number(x)) == x);
}

TEST_CASE("run CSV round-trips") {
  Config c;
  c.T = 60;
  c.N_L = 1000;
  c.N_H = 10;
  const auto run = run_simulation(c, 9);
  const fs::path dir = fs::temp_directory_path() / "hfabm_io_test";
  fs::remove_all(dir);
  const auto path = dir / "run.csv";
  io::write_run_csv(path, run);
  const auto back = io::read_run_csv(path);
  REQUIRE(back.size() == run.sessions.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    CHECK(back[i].close == run.sessions[i].close);
    CHECK(back[i].fundamental == run.sessions[i].fundamental);
    CHECK(back[i].spread_pre_match == run.sessions[i].spread_pre_match);
    CHECK(back[i].spread_end == run.sessions[i].spread_end);
    CHECK(back[i].hf_sell_vol == run.sessions[i].hf_sell_vol);
    CHECK(back[i].lf_exec_vol == run.sessions[i].lf_exec_vol);
    CHECK(back[i].n_trades == run.sessions[i].n_trades);
  }

  const auto side = io::run_sidecar(run, c);
  CHECK(side["seed"].get<std::uint64_t>() == 9);
  CHECK(parse_config(side["config_text"].get<std::string>()) == c);

  io::write_text(dir / "bad.csv", std::string(io::kRunColumns) + "\n0,100,100\n");
  try {
    io::read_run_csv(dir / "bad.csv");
    FAIL("expected a parse error");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("bad.csv:2") != std::string::npos);
  }
  CHECK_THROWS(io::read_text(dir / "missing.csv"));
  fs::remove_all(dir);
}

TEST_CASE("CSV tables") {
  const auto t = io::parse_csv("a,b\n1,x\n2.5,\n");
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  CHECK(t.rows.size() == 2);
  CHECK(t.number(1, "a") == 2.5);
  CHECK(t.text(0, "b") == "x");
  CHECK_FALSE(t.maybe_number(1, "b"));
  CHECK_THROWS(t.column("c"));
  CHECK(io::to_csv(t) == "a,b\n1,x\n2.5,\n");
}
