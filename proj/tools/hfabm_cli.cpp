// hfabm: simulate, analyze and report on the LF/HF limit-order-book model.
//
//   hfabm run --seeds 10 --set gamma_H=5 --out results
//   hfabm experiment gamma-sweep --threads 4
//   hfabm report results/gamma-sweep-20261016-120000
//   hfabm figures results/gamma-sweep-20261016-120000

#include "hfabm/config.hpp"
#include "hfabm/experiments.hpp"
#include "hfabm/market_engine.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

using namespace hfabm;

namespace {

struct Common {
  std::string config_path;
  std::vector<std::string> sets;
  std::optional<std::uint64_t> seed;
  std::optional<int> seeds;
  std::string out = "results";
  bool exact = false;
  unsigned threads = 0;
  bool no_figures = false;
  bool no_runs = false;
  bool quiet = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "key = value config file (absent keys use the defaults)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--set", c.sets, "Override one config key, e.g. --set gamma_H=5 (repeatable)");
  cmd->add_option("--out", c.out, "Parent directory of the timestamped result directory");
  cmd->add_flag("--exact", c.exact, "Write into --out itself instead of a timestamped subdirectory");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = hardware concurrency)");
  cmd->add_flag("--no-figures", c.no_figures, "Skip the SVG figures");
  cmd->add_flag("--no-runs", c.no_runs, "Skip the per-run CSV and JSON files");
  cmd->add_flag("-q,--quiet", c.quiet, "No progress output");
}

Config build_config(const Common& c) {
  Config cfg = c.config_path.empty() ? Config{} : load_config(c.config_path);
  std::string overrides;
  for (const auto& s : c.sets) overrides += s + "\n";
  apply_overrides(cfg, overrides);
  if (c.seeds) cfg.MC = *c.seeds;
  validate(cfg);
  return cfg;
}

experiments::ExperimentOptions options(const Common& c) {
  experiments::ExperimentOptions o;
  o.out = c.out;
  o.exact_dir = c.exact;
  o.threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
  o.write_runs = !c.no_runs;
  o.figures = !c.no_figures;
  o.log = c.quiet ? nullptr : &std::cerr;
  return o;
}

int finish(const experiments::ExperimentResult& r) {
  std::cout << r.dir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based limit-order-book simulator with low- and high-frequency traders"};
  app.require_subcommand(1);

  Common run_opts;
  auto* run = app.add_subcommand("run", "Monte Carlo runs of one configuration");
  add_common(run, run_opts);
  run->add_option("--seed", run_opts.seed, "Run exactly this seed (ignores MC and master_seed)");
  run->add_option("--seeds", run_opts.seeds, "Number of runs; seeds derive from master_seed")->check(CLI::PositiveNumber);
  std::string label = "run";
  run->add_option("--label", label, "Name of the point directory");

  Common exp_opts;
  std::string exp_name;
  auto* exp = app.add_subcommand("experiment", "A named experiment: baseline, only-lft, scenarios, gamma-sweep");
  exp->add_option("name", exp_name, "Experiment name")->required()->check(CLI::IsMember(experiments::experiment_names()));
  add_common(exp, exp_opts);
  exp->add_option("--seed", exp_opts.seed, "Master seed the run seeds derive from");
  exp->add_option("--seeds", exp_opts.seeds, "Runs per point (overrides MC)")->check(CLI::PositiveNumber);

  std::string report_dir;
  auto* rep = app.add_subcommand("report", "Print tables and acceptance verdicts of a result directory");
  rep->add_option("dir", report_dir, "Experiment or point directory")->required()->check(CLI::ExistingDirectory);

  std::string fig_dir;
  auto* figs = app.add_subcommand("figures", "Regenerate SVG figures from the statistic CSVs");
  figs->add_option("dir", fig_dir, "Experiment or point directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      Config cfg = build_config(run_opts);
      std::vector<std::uint64_t> seeds;
      if (run_opts.seed) {
        seeds = {*run_opts.seed};
      } else {
        seeds = derive_seeds(cfg.master_seed, static_cast<std::size_t>(cfg.MC));
      }
      return finish(experiments::run_experiment(experiments::single_point(cfg, seeds, label), options(run_opts)));
    }
    if (*exp) {
      Config cfg = build_config(exp_opts);
      if (exp_opts.seed) cfg.master_seed = *exp_opts.seed;
      return finish(experiments::run_experiment(experiments::make_experiment(exp_name, cfg), options(exp_opts)));
    }
    if (*rep) return experiments::report(report_dir, std::cout);
    if (*figs) {
      for (const auto& p : experiments::figures_for(fig_dir)) std::cout << p.string() << "\n";
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
