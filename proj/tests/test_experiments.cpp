#include "hfabm/experiments.hpp"
#include "hfabm/io.hpp"

#include <doctest.h>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <sstream>

using namespace hfabm;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("hfabm_exp_" + name);
  fs::remove_all(p);
  return p;
}

experiments::ExperimentOptions quiet(const fs::path& dir, unsigned threads = 1) {
  experiments::ExperimentOptions o;
  o.out = dir;
  o.exact_dir = true;
  o.threads = threads;
  return o;
}

std::size_t count_with_extension(const fs::path& dir, const std::string& ext) {
  std::size_t n = 0;
  for (const auto& e : fs::directory_iterator(dir)) n += e.path().extension() == ext;
  return n;
}

}  // namespace

TEST_CASE("registry") {
  Config c;
  c.MC = 4;
  const auto sweep = experiments::make_experiment("gamma-sweep", c);
  REQUIRE(sweep.points.size() == 5);
  CHECK(sweep.seeds.size() == 4);
  CHECK(experiments::resolve(sweep, sweep.points[3]).gamma_H == 15);
  const auto t1 = experiments::make_experiment("scenarios", c);
  REQUIRE(t1.points.size() == 2);
  const Config only = experiments::resolve(t1, t1.points[1]);
  CHECK(only.N_H == 0);
  Config back = only;
  back.N_H = c.N_H;
  CHECK(back == c);
  CHECK_THROWS_AS(experiments::make_experiment("nope", c), std::invalid_argument);
  CHECK(experiments::make_experiment("baseline", c).seeds == derive_seeds(c.master_seed, 4));
}

TEST_CASE("baseline smoke experiment") {
  Config c;
  c.MC = 3;
  c.T = 200;
  const auto dir = scratch("smoke");
  const auto res = experiments::run_experiment(experiments::make_experiment("baseline", c), quiet(dir));
  CHECK(res.dir == dir);
  REQUIRE(res.points.size() == 1);
  const auto point = dir / "baseline";
  CHECK(count_with_extension(point / "runs", ".csv") == 3);
  CHECK(count_with_extension(point / "runs", ".json") == 3);
  CHECK(fs::exists(point / "summary.json"));
  CHECK(fs::exists(point / "stats" / "runs.csv"));
  CHECK(count_with_extension(point / "figures", ".svg") >= 5);
  CHECK(parse_config(io::read_text(point / "config.txt")) == c);

  const auto j = nlohmann::json::parse(io::read_text(point / "summary.json"));
  const auto back = experiments::point_stats_from_json(j);
  CHECK(back.runs == 3);
  CHECK(back.sigma_p.mean == res.points[0].sigma_p.mean);
  CHECK(experiments::to_json(back) == j);

  std::ostringstream out;
  experiments::report(dir, out);
  CHECK(out.str().find("sigma_P") != std::string::npos);
  CHECK(out.str().find("crashes/run") != std::string::npos);
  CHECK(out.str().find("[1] stylized facts") != std::string::npos);

  fs::remove_all(point / "figures");
  CHECK(experiments::figures_for(dir).size() >= 5);
  fs::remove_all(dir);
}

TEST_CASE("only-LFT report") {
  Config c;
  c.MC = 2;
  c.T = 150;
  const auto dir = scratch("only");
  experiments::run_experiment(experiments::make_experiment("only-lft", c), quiet(dir));
  std::ostringstream out;
  const int code = experiments::report(dir, out);
  const auto text = out.str();
  CHECK(text.find("only-lft") != std::string::npos);
  CHECK(text.find("0.00 (0.00)         -") != std::string::npos);
  CHECK(text.find("only-LFT crashes/run 0.00 = 0 ok") != std::string::npos);
  CHECK(code == 0);
  fs::remove_all(dir);
}

TEST_CASE("sweep table and reruns") {
  Config c;
  c.MC = 2;
  c.T = 120;
  c.N_L = 2000;
  c.N_H = 20;
  const auto spec = experiments::make_experiment("gamma-sweep", c);
  const auto a = scratch("sweep_a");
  const auto b = scratch("sweep_b");
  auto opts_a = quiet(a, 1);
  opts_a.figures = false;
  auto opts_b = quiet(b, 3);
  opts_b.figures = false;
  experiments::run_experiment(spec, opts_a);
  experiments::run_experiment(spec, opts_b);

  const auto table = io::read_csv(a / "table.csv");
  REQUIRE(table.rows.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK(table.number(i, "gamma_H") == experiments::kSweepGammas[i]);

  CHECK(io::read_text(a / "table.csv") == io::read_text(b / "table.csv"));
  for (const auto& p : spec.points) {
    for (const auto& e : fs::directory_iterator(a / p.label / "stats"))
      CHECK(io::read_text(e.path()) == io::read_text(b / p.label / "stats" / e.path().filename()));
    CHECK(io::read_text(a / p.label / "summary.json") == io::read_text(b / p.label / "summary.json"));
  }

  std::ostringstream out;
  experiments::report(a, out);
  CHECK(out.str().find("[5] gamma_H sweep") != std::string::npos);
  CHECK(out.str().find("HF order lifetime gamma_H") != std::string::npos);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("report on a missing directory is a diagnostic") {
  std::ostringstream out;
  CHECK_THROWS(experiments::report(fs::temp_directory_path() / "hfabm_no_such_dir", out));
}
