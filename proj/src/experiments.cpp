#include "hfabm/experiments.hpp"

#include "hfabm/acceptance.hpp"
#include "hfabm/io.hpp"
#include "hfabm/svg.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <ostream>
#include <stdexcept>

namespace fs = std::filesystem;
using nlohmann::json;

namespace hfabm::experiments {

std::string_view to_string(Role r) noexcept {
  switch (r) {
    case Role::Baseline: return "baseline";
    case Role::OnlyLft: return "only-lft";
    case Role::Sweep: return "sweep";
    case Role::Custom: break;
  }
  return "custom";
}

Role role_from_string(std::string_view s) {
  for (Role r : {Role::Baseline, Role::OnlyLft, Role::Sweep, Role::Custom})
    if (to_string(r) == s) return r;
  throw std::invalid_argument("unknown point role '" + std::string(s) + "'");
}

std::vector<std::string> experiment_names() { return {"baseline", "only-lft", "scenarios", "gamma-sweep"}; }

ExperimentSpec make_experiment(std::string_view name, const Config& base) {
  validate(base);
  ExperimentSpec spec;
  spec.name = std::string(name);
  spec.base = base;
  spec.seeds = derive_seeds(base.master_seed, static_cast<std::size_t>(base.MC));
  const Point baseline{"baseline", "", Role::Baseline};
  const Point only_lft{"only-lft", "N_H = 0\n", Role::OnlyLft};
  if (name == "baseline") {
    spec.points = {baseline};
  } else if (name == "only-lft") {
    spec.points = {only_lft};
  } else if (name == "scenarios") {
    spec.points = {baseline, only_lft};
  } else if (name == "gamma-sweep") {
    for (int g : kSweepGammas)
      spec.points.push_back({"gamma_H-" + std::to_string(g), "gamma_H = " + std::to_string(g) + "\n", Role::Sweep});
  } else {
    std::string known;
    for (const auto& n : experiment_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown experiment '" + std::string(name) + "' (known: " + known + ")");
  }
  return spec;
}

ExperimentSpec single_point(const Config& config, std::vector<std::uint64_t> seeds, std::string label) {
  validate(config);
  ExperimentSpec spec;
  spec.name = "run";
  spec.base = config;
  spec.seeds = std::move(seeds);
  spec.points = {{std::move(label), "", Role::Custom}};
  return spec;
}

Config resolve(const ExperimentSpec& spec, const Point& point) {
  Config c = spec.base;
  apply_overrides(c, point.overrides);
  validate(c);
  return c;
}

PointAnalysis analyze_point(std::vector<RunRecord>& runs, const Config& config) {
  PointAnalysis a;
  a.summary = analytics::summarize(runs, analytics::CrashParams::from(config));

  bool acf_ok = !runs.empty();
  for (const auto& r : runs) acf_ok = acf_ok && r.sessions.size() > 22;
  if (acf_ok) {
    try {
      a.acf = analytics::acf_battery(runs, 20);
    } catch (const std::invalid_argument&) {
      a.acf = {};  // a constant price path has no autocorrelation
    }
  }

  const auto pooled = analytics::pooled_returns(runs);
  try {
    a.excess_kurtosis = stats::excess_kurtosis(pooled);
  } catch (const std::invalid_argument&) {
    a.excess_kurtosis.reset();
  }
  a.density = analytics::return_density(pooled);
  if (a.summary.tail) a.tail = analytics::tail_curve(pooled, a.summary.tail->fit);
  a.spread = analytics::spread_distribution_by_phase(runs);
  a.hf_concentration = analytics::sell_concentration_ratio(runs, TraderClass::HF);
  a.lf_concentration = analytics::sell_concentration_ratio(runs, TraderClass::LF);
  for (const auto& r : runs)
    for (const auto& s : r.sessions)
      if (s.phase != Phase::Unlabeled) ++a.phase_sessions[analytics::phase_index(s.phase)];
  for (std::size_t i = 0; i < a.summary.per_run.size(); ++i)
    if (a.summary.per_run[i].n_crashes > 0) {
      a.sample_run = i;
      break;
    }
  return a;
}

PointStats point_stats(const PointAnalysis& a, const Config& config, std::string label, Role role) {
  PointStats p;
  p.label = std::move(label);
  p.role = role;
  p.config_text = format_config(config);
  p.N_H = config.N_H;
  p.gamma_H = config.gamma_H;
  p.runs = a.summary.runs;
  p.sigma_p = a.summary.sigma_p;
  p.crash_count = a.summary.crash_count;
  p.mean_duration = a.summary.mean_duration;
  p.correlations[0] = a.summary.correlations.cell;
  p.correlations[1] = a.summary.correlations_executed.cell;
  p.acf_returns = a.acf.mean.returns;
  p.acf_abs = a.acf.mean.abs;
  p.acf_squared = a.acf.mean.squared;
  p.acf_band = a.acf.band;
  p.excess_kurtosis = a.excess_kurtosis;
  if (a.summary.tail) p.tail = a.summary.tail->fit;
  p.phase_sessions = a.phase_sessions;

  const auto& sp = a.spread;
  if (!sp.kernel[0].empty() && !sp.kernel[1].empty()) {
    p.spread_margin_kernel = analytics::min_margin(sp.kernel[1], sp.kernel[0]);
    p.spread_margin_empirical = analytics::min_margin(sp.empirical[1], sp.empirical[0]);
  }
  const analytics::PhaseCurves* conc[2] = {&a.hf_concentration, &a.lf_concentration};
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t k = 0; k < 3; ++k)
      if (!conc[c]->samples[k].empty()) p.concentration_median[c][k] = stats::median(conc[c]->samples[k]);
  const auto& hf = a.hf_concentration;
  if (!hf.kernel[0].empty() && !hf.kernel[2].empty()) {
    p.hf_recovery_sup_kernel = analytics::sup_distance(hf.kernel[2], hf.kernel[0]);
    p.hf_recovery_sup_empirical = analytics::sup_distance(hf.empirical[2], hf.empirical[0]);
  }
  return p;
}

namespace {

json mean_se_json(const stats::MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

stats::MeanSe mean_se_from(const json& j) {
  return {j.at("mean").get<double>(), j.at("se").get<double>(), j.at("n").get<std::size_t>()};
}

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

std::optional<double> opt_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

constexpr analytics::VolumeSource kSources[] = {analytics::VolumeSource::Submitted, analytics::VolumeSource::Executed};
constexpr const char* kClassNames[] = {"hft", "lft"};

}  // namespace

json to_json(const PointStats& p) {
  json corr = json::object();
  for (std::size_t s = 0; s < 2; ++s) {
    json by_cond = json::object();
    for (std::size_t c = 0; c < 3; ++c) {
      json by_vol = json::object();
      for (std::size_t v = 0; v < 3; ++v) {
        const auto& cell = p.correlations[s][c][v];
        by_vol[std::string(to_string(analytics::kVolumeKinds[v]))] = cell ? mean_se_json(*cell) : json(nullptr);
      }
      by_cond[std::string(to_string(analytics::kConditions[c]))] = by_vol;
    }
    corr[std::string(to_string(kSources[s]))] = by_cond;
  }
  json conc = json::object();
  for (std::size_t c = 0; c < 2; ++c) {
    json by_phase = json::object();
    for (std::size_t k = 0; k < 3; ++k)
      by_phase[std::string(to_string(analytics::kPhases[k]))] = opt_json(p.concentration_median[c][k]);
    conc[kClassNames[c]] = by_phase;
  }
  json tail = nullptr;
  if (p.tail)
    tail = {{"alpha", p.tail->alpha},
            {"alpha_se", p.tail->alpha_se},
            {"x_min", p.tail->x_min},
            {"n_tail", p.tail->n_tail},
            {"ks", p.tail->ks}};
  json phases = json::object();
  for (std::size_t k = 0; k < 3; ++k)
    phases[std::string(to_string(analytics::kPhases[k]))] = p.phase_sessions[k];

  return {
      {"label", p.label},
      {"role", std::string(to_string(p.role))},
      {"config_text", p.config_text},
      {"N_H", p.N_H},
      {"gamma_H", p.gamma_H},
      {"runs", p.runs},
      {"sigma_p", mean_se_json(p.sigma_p)},
      {"crash_count", mean_se_json(p.crash_count)},
      {"mean_duration", mean_se_json(p.mean_duration)},
      {"correlations", corr},
      {"acf", {{"returns", p.acf_returns}, {"abs", p.acf_abs}, {"squared", p.acf_squared}, {"band", p.acf_band}}},
      {"excess_kurtosis", opt_json(p.excess_kurtosis)},
      {"tail_fit", tail},
      {"phase_sessions", phases},
      {"spread_margin", {{"kernel", opt_json(p.spread_margin_kernel)}, {"empirical", opt_json(p.spread_margin_empirical)}}},
      {"concentration_median", conc},
      {"hf_recovery_sup",
       {{"kernel", opt_json(p.hf_recovery_sup_kernel)}, {"empirical", opt_json(p.hf_recovery_sup_empirical)}}},
  };
}

PointStats point_stats_from_json(const json& j) {
  PointStats p;
  p.label = j.at("label").get<std::string>();
  p.role = role_from_string(j.at("role").get<std::string>());
  p.config_text = j.at("config_text").get<std::string>();
  p.N_H = j.at("N_H").get<int>();
  p.gamma_H = j.at("gamma_H").get<Session>();
  p.runs = j.at("runs").get<std::size_t>();
  p.sigma_p = mean_se_from(j.at("sigma_p"));
  p.crash_count = mean_se_from(j.at("crash_count"));
  p.mean_duration = mean_se_from(j.at("mean_duration"));
  const json& corr = j.at("correlations");
  for (std::size_t s = 0; s < 2; ++s)
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t v = 0; v < 3; ++v) {
        const json& cell = corr.at(std::string(to_string(kSources[s])))
                               .at(std::string(to_string(analytics::kConditions[c])))
                               .at(std::string(to_string(analytics::kVolumeKinds[v])));
        if (!cell.is_null()) p.correlations[s][c][v] = mean_se_from(cell);
      }
  const json& acf = j.at("acf");
  p.acf_returns = acf.at("returns").get<std::vector<double>>();
  p.acf_abs = acf.at("abs").get<std::vector<double>>();
  p.acf_squared = acf.at("squared").get<std::vector<double>>();
  p.acf_band = acf.at("band").get<double>();
  p.excess_kurtosis = opt_from(j.at("excess_kurtosis"));
  if (const json& t = j.at("tail_fit"); !t.is_null())
    p.tail = stats::TailFit{t.at("alpha").get<double>(), t.at("alpha_se").get<double>(), t.at("x_min").get<double>(),
                            t.at("n_tail").get<std::size_t>(), t.at("ks").get<double>()};
  for (std::size_t k = 0; k < 3; ++k)
    p.phase_sessions[k] = j.at("phase_sessions").at(std::string(to_string(analytics::kPhases[k]))).get<std::size_t>();
  p.spread_margin_kernel = opt_from(j.at("spread_margin").at("kernel"));
  p.spread_margin_empirical = opt_from(j.at("spread_margin").at("empirical"));
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t k = 0; k < 3; ++k)
      p.concentration_median[c][k] =
          opt_from(j.at("concentration_median").at(kClassNames[c]).at(std::string(to_string(analytics::kPhases[k]))));
  p.hf_recovery_sup_kernel = opt_from(j.at("hf_recovery_sup").at("kernel"));
  p.hf_recovery_sup_empirical = opt_from(j.at("hf_recovery_sup").at("empirical"));
  return p;
}

namespace {

using io::format_number;
using io::optional_cell;

std::string str(std::size_t v) { return std::to_string(v); }
std::string str(std::int64_t v) { return std::to_string(v); }

void add_curves(io::Table& t, std::string_view cls, const analytics::PhaseCurves& c, bool with_class) {
  for (std::size_t k = 0; k < 3; ++k) {
    if (c.kernel[k].empty()) continue;
    for (std::size_t g = 0; g < c.grid.size(); ++g) {
      std::vector<std::string> row;
      if (with_class) row.emplace_back(cls);
      row.emplace_back(to_string(analytics::kPhases[k]));
      row.push_back(format_number(c.grid[g]));
      row.push_back(format_number(c.density[k][g]));
      row.push_back(format_number(c.kernel[k][g]));
      row.push_back(format_number(c.empirical[k][g]));
      t.rows.push_back(std::move(row));
    }
  }
}

}  // namespace

void write_point(const fs::path& dir, const PointAnalysis& a, const PointStats& st, std::span<const RunRecord> runs,
                 bool figures) {
  const fs::path sd = dir / "stats";
  fs::create_directories(sd);
  const auto& per_run = a.summary.per_run;

  io::Table t{{"run", "seed", "sigma_p", "n_crashes", "mean_duration"}, {}};
  for (std::size_t i = 0; i < per_run.size(); ++i)
    t.rows.push_back({str(i), std::to_string(per_run[i].seed), format_number(per_run[i].sigma_p),
                      str(per_run[i].n_crashes), optional_cell(per_run[i].mean_duration)});
  io::write_text(sd / "runs.csv", io::to_csv(t));

  t = {{"run", "seed", "onset", "trough", "recovery", "depth", "duration"}, {}};
  for (std::size_t i = 0; i < per_run.size(); ++i)
    for (const auto& e : per_run[i].crashes)
      t.rows.push_back({str(i), std::to_string(per_run[i].seed), str(e.onset), str(e.trough), str(e.recovery),
                        format_number(e.depth), str(e.duration)});
  io::write_text(sd / "crashes.csv", io::to_csv(t));

  t = {{"source", "condition", "volume", "mean", "se", "runs"}, {}};
  io::Table per{{"source", "run", "seed", "condition", "volume", "value"}, {}};
  for (std::size_t s = 0; s < 2; ++s) {
    const auto& table = s == 0 ? a.summary.correlations : a.summary.correlations_executed;
    for (std::size_t c = 0; c < 3; ++c)
      for (std::size_t v = 0; v < 3; ++v) {
        const auto& cell = table.cell[c][v];
        t.rows.push_back({std::string(to_string(kSources[s])), std::string(to_string(analytics::kConditions[c])),
                          std::string(to_string(analytics::kVolumeKinds[v])), cell ? format_number(cell->mean) : "",
                          cell ? format_number(cell->se) : "", cell ? str(cell->n) : "0"});
        for (std::size_t r = 0; r < table.per_run.size(); ++r)
          per.rows.push_back({std::string(to_string(kSources[s])), str(r), std::to_string(per_run[r].seed),
                              std::string(to_string(analytics::kConditions[c])),
                              std::string(to_string(analytics::kVolumeKinds[v])),
                              optional_cell(table.per_run[r].cell[c][v])});
      }
  }
  io::write_text(sd / "correlations.csv", io::to_csv(t));
  io::write_text(sd / "correlations_per_run.csv", io::to_csv(per));

  t = {{"run", "seed", "lag", "returns", "abs", "squared"}, {}};
  for (std::size_t r = 0; r < a.acf.per_run.size(); ++r)
    for (std::size_t k = 0; k < a.acf.max_lag; ++k)
      t.rows.push_back({str(r), std::to_string(per_run[r].seed), str(k + 1), format_number(a.acf.per_run[r].returns[k]),
                        format_number(a.acf.per_run[r].abs[k]), format_number(a.acf.per_run[r].squared[k])});
  io::write_text(sd / "acf.csv", io::to_csv(t));
  t = {{"lag", "returns", "abs", "squared", "band"}, {}};
  for (std::size_t k = 0; k < a.acf.mean.returns.size(); ++k)
    t.rows.push_back({str(k + 1), format_number(a.acf.mean.returns[k]), format_number(a.acf.mean.abs[k]),
                      format_number(a.acf.mean.squared[k]), format_number(a.acf.band)});
  io::write_text(sd / "acf_mean.csv", io::to_csv(t));

  t = {{"x", "kernel", "normal"}, {}};
  for (std::size_t g = 0; g < a.density.grid.size(); ++g)
    t.rows.push_back({format_number(a.density.grid[g]), format_number(a.density.kernel[g]),
                      format_number(a.density.normal[g])});
  io::write_text(sd / "returns_density.csv", io::to_csv(t));

  t = {{"x", "empirical", "fitted"}, {}};
  for (std::size_t i = 0; i < a.tail.x.size(); ++i)
    t.rows.push_back({format_number(a.tail.x[i]), format_number(a.tail.empirical[i]), format_number(a.tail.fitted[i])});
  io::write_text(sd / "tail.csv", io::to_csv(t));
  t = {{"alpha", "alpha_se", "x_min", "n_tail", "ks", "excess_kurtosis"}, {}};
  if (st.tail)
    t.rows.push_back({format_number(st.tail->alpha), format_number(st.tail->alpha_se), format_number(st.tail->x_min),
                      str(st.tail->n_tail), format_number(st.tail->ks), optional_cell(st.excess_kurtosis)});
  io::write_text(sd / "tail_fit.csv", io::to_csv(t));

  t = {{"phase", "x", "density", "kernel_ccdf", "empirical_ccdf"}, {}};
  add_curves(t, "", a.spread, false);
  io::write_text(sd / "spread_ccdf.csv", io::to_csv(t));

  t = {{"class", "phase", "x", "density", "kernel_ccdf", "empirical_ccdf"}, {}};
  add_curves(t, "hft", a.hf_concentration, true);
  add_curves(t, "lft", a.lf_concentration, true);
  io::write_text(sd / "concentration.csv", io::to_csv(t));

  t = {{"session", "close", "fundamental", "spread_end", "phase"}, {}};
  if (a.sample_run < runs.size())
    for (const auto& s : runs[a.sample_run].sessions)
      t.rows.push_back({str(s.session), format_number(s.close), format_number(s.fundamental),
                        optional_cell(s.spread_end), std::string(to_string(s.phase))});
  io::write_text(sd / "sample_path.csv", io::to_csv(t));

  io::write_text(dir / "summary.json", to_json(st).dump(2) + "\n");
  if (figures) write_figures(dir);
}

namespace {

const char* kPhaseColors[] = {"#1f4e79", "#b22222", "#2e8b57"};

svg::Axes axes(std::string title, std::string xlabel, std::string ylabel) {
  svg::Axes a;
  a.title = std::move(title);
  a.xlabel = std::move(xlabel);
  a.ylabel = std::move(ylabel);
  return a;
}

std::vector<double> column(const io::Table& t, std::string_view name, std::string_view filter_col = {},
                           std::string_view filter_val = {}, std::string_view filter2_col = {},
                           std::string_view filter2_val = {}) {
  std::vector<double> v;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    if (!filter_col.empty() && t.text(r, filter_col) != filter_val) continue;
    if (!filter2_col.empty() && t.text(r, filter2_col) != filter2_val) continue;
    v.push_back(t.maybe_number(r, name).value_or(std::nan("")));
  }
  return v;
}

}  // namespace

std::vector<fs::path> write_figures(const fs::path& point_dir) {
  const fs::path sd = point_dir / "stats";
  const fs::path fd = point_dir / "figures";
  fs::create_directories(fd);
  std::vector<fs::path> out;
  auto emit = [&](const std::string& name, const std::string& svg) {
    io::write_text(fd / name, svg);
    out.push_back(fd / name);
  };

  const io::Table acf = io::read_csv(sd / "acf.csv");
  const io::Table acf_mean = io::read_csv(sd / "acf_mean.csv");
  if (!acf_mean.rows.empty()) {
    const double band = acf_mean.number(0, "band");
    std::vector<std::vector<double>> groups;
    std::vector<std::string> labels;
    for (std::size_t r = 0; r < acf_mean.rows.size(); ++r) {
      const std::string lag = acf_mean.text(r, "lag");
      groups.push_back(column(acf, "returns", "lag", lag));
      labels.push_back(lag);
    }
    auto ax = axes("Price-return autocorrelations across runs", "lag", "autocorrelation");
    ax.hlines = {-band, 0.0, band};
    emit("fig1_returns_acf_boxplot.svg", svg::box_plot(ax, groups, labels));

    auto ax2 = axes("Mean autocorrelation of |r| and r^2", "lag", "autocorrelation");
    ax2.hlines = {0.0};
    emit("fig2_volatility_clustering.svg",
         svg::line_plot(ax2, {{"|r|", column(acf_mean, "lag"), column(acf_mean, "abs"), svg::Style::Solid, "#1f4e79"},
                              {"r^2", column(acf_mean, "lag"), column(acf_mean, "squared"), svg::Style::Dashed,
                               "#b22222"}}));
  }

  const io::Table dens = io::read_csv(sd / "returns_density.csv");
  if (!dens.rows.empty()) {
    auto k = column(dens, "kernel");
    const double top = *std::max_element(k.begin(), k.end());
    auto ax = axes("Density of pooled returns", "log return", "density");
    ax.log_y = true;
    ax.ylim = std::pair{top * 1e-4, top * 2.0};
    emit("fig3_returns_density.svg",
         svg::line_plot(ax, {{"kernel density", column(dens, "x"), k, svg::Style::Markers, "#1f4e79"},
                             {"normal fit", column(dens, "x"), column(dens, "normal"), svg::Style::Solid, "#b22222"}}));
  }

  const io::Table tail = io::read_csv(sd / "tail.csv");
  if (!tail.rows.empty()) {
    auto ax = axes("Negative-return tail", "|r|", "P(X >= |r|)");
    ax.log_x = ax.log_y = true;
    emit("fig4_negative_tail.svg",
         svg::line_plot(ax, {{"empirical", column(tail, "x"), column(tail, "empirical"), svg::Style::Markers, "#1f4e79"},
                             {"power-law fit", column(tail, "x"), column(tail, "fitted"), svg::Style::Dashed,
                              "#b22222"}}));
  }

  const io::Table path = io::read_csv(sd / "sample_path.csv");
  if (!path.rows.empty()) {
    auto ax = axes("Price and bid-ask spread, one run", "session", "closing price");
    emit("fig5_price_spread.svg",
         svg::dual_axis_plot(ax, {"close", column(path, "session"), column(path, "close"), svg::Style::Solid, "#1f4e79"},
                             {"spread", column(path, "session"), column(path, "spread_end"), svg::Style::Dashed,
                              "#b22222"},
                             "bid-ask spread"));
  }

  const io::Table spread = io::read_csv(sd / "spread_ccdf.csv");
  if (!spread.rows.empty()) {
    std::vector<svg::Series> s;
    for (std::size_t k = 0; k < 3; ++k) {
      const std::string ph(to_string(analytics::kPhases[k]));
      auto x = column(spread, "x", "phase", ph);
      if (x.empty()) continue;
      s.push_back({ph, x, column(spread, "kernel_ccdf", "phase", ph), svg::Style::Solid, kPhaseColors[k]});
    }
    auto ax = axes("Bid-ask spread by market phase", "spread", "P(S > s)");
    emit("fig6_spread_ccdf.svg", svg::line_plot(ax, s));
  }

  const io::Table conc = io::read_csv(sd / "concentration.csv");
  if (!conc.rows.empty()) {
    auto density_fig = [&](std::string_view phase, const std::string& title, const std::string& file) {
      std::vector<svg::Series> s;
      auto hx = column(conc, "x", "class", "hft", "phase", phase);
      auto lx = column(conc, "x", "class", "lft", "phase", phase);
      if (!hx.empty())
        s.push_back({"HFT", hx, column(conc, "density", "class", "hft", "phase", phase), svg::Style::Solid, "#1f4e79"});
      if (!lx.empty())
        s.push_back({"LFT", lx, column(conc, "density", "class", "lft", "phase", phase), svg::Style::Dashed, "#b22222"});
      if (s.empty()) return;
      auto ax = axes(title, "sell volume / total volume", "density");
      ax.xlim = std::pair{0.0, 1.0};
      emit(file, svg::line_plot(ax, s));
    };
    density_fig("normal", "Sell concentration, normal times", "fig7_concentration_normal.svg");
    density_fig("crash", "Sell concentration, crash phases", "fig8_concentration_crash.svg");

    auto ccdf_fig = [&](std::string_view cls, const std::string& title, const std::string& file) {
      std::vector<svg::Series> s;
      for (std::size_t k = 0; k < 3; ++k) {
        const std::string ph(to_string(analytics::kPhases[k]));
        auto x = column(conc, "x", "class", cls, "phase", ph);
        if (x.empty()) continue;
        s.push_back({ph, x, column(conc, "kernel_ccdf", "class", cls, "phase", ph), svg::Style::Solid, kPhaseColors[k]});
      }
      if (s.empty()) return;
      auto ax = axes(title, "sell volume / total volume", "P(R > r)");
      ax.xlim = std::pair{0.0, 1.0};
      emit(file, svg::line_plot(ax, s));
    };
    ccdf_fig("hft", "HFT sell concentration by phase", "fig9_hft_concentration_ccdf.svg");
    ccdf_fig("lft", "LFT sell concentration by phase", "fig10_lft_concentration_ccdf.svg");
  }
  return out;
}

namespace {

fs::path fresh_dir(const ExperimentSpec& spec, const ExperimentOptions& opts) {
  if (opts.exact_dir) return opts.out;
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%d-%H%M%S", &tm);
  fs::path dir = opts.out / (spec.name + "-" + stamp);
  for (int k = 2; fs::exists(dir); ++k) dir = opts.out / (spec.name + "-" + stamp + "-" + std::to_string(k));
  return dir;
}

std::string run_file_stem(std::size_t index, std::uint64_t seed) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "run_%03zu_%llu", index, static_cast<unsigned long long>(seed));
  return buf;
}

io::Table experiment_table(const std::vector<PointStats>& points) {
  io::Table t{{"label", "role", "N_H", "gamma_H", "runs", "sigma_p", "sigma_p_se", "crashes", "crashes_se", "duration",
               "duration_se", "duration_runs"},
              {}};
  for (const auto& p : points)
    t.rows.push_back({p.label, std::string(to_string(p.role)), std::to_string(p.N_H), std::to_string(p.gamma_H),
                      str(p.runs), format_number(p.sigma_p.mean), format_number(p.sigma_p.se),
                      format_number(p.crash_count.mean), format_number(p.crash_count.se),
                      p.mean_duration.n ? format_number(p.mean_duration.mean) : "",
                      p.mean_duration.n ? format_number(p.mean_duration.se) : "", str(p.mean_duration.n)});
  return t;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentSpec& spec, const ExperimentOptions& opts) {
  ExperimentResult result;
  result.dir = fresh_dir(spec, opts);
  fs::create_directories(result.dir);

  json manifest = {{"name", spec.name},
                   {"master_seed", spec.base.master_seed},
                   {"seeds", spec.seeds},
                   {"base_config", format_config(spec.base)},
                   {"points", json::array()}};
  for (const auto& p : spec.points)
    manifest["points"].push_back(
        {{"label", p.label}, {"role", std::string(to_string(p.role))}, {"overrides", p.overrides}, {"dir", p.label}});
  io::write_text(result.dir / "experiment.json", manifest.dump(2) + "\n");

  for (const auto& point : spec.points) {
    const Config cfg = resolve(spec, point);
    const fs::path pd = result.dir / point.label;
    io::write_text(pd / "config.txt", format_config(cfg));
    if (opts.log) *opts.log << "[" << spec.name << "] " << point.label << ": " << spec.seeds.size() << " runs\n";

    RunCallback flush;
    if (opts.write_runs)
      flush = [&](std::size_t i, const RunRecord& run) {
        const std::string stem = run_file_stem(i, run.seed);
        io::write_run_csv(pd / "runs" / (stem + ".csv"), run);
        io::write_run_sidecar(pd / "runs" / (stem + ".json"), run, cfg);
      };
    std::vector<RunRecord> runs = run_monte_carlo(cfg, spec.seeds, point.label, opts.threads, flush);
    const PointAnalysis analysis = analyze_point(runs, cfg);
    PointStats st = point_stats(analysis, cfg, point.label, point.role);
    write_point(pd, analysis, st, runs, opts.figures);
    if (opts.log)
      *opts.log << "[" << spec.name << "] " << point.label << ": sigma_P " << format_number(st.sigma_p.mean)
                << ", crashes/run " << format_number(st.crash_count.mean) << "\n";
    result.points.push_back(std::move(st));
  }
  io::write_text(result.dir / "table.csv", io::to_csv(experiment_table(result.points)));
  return result;
}

std::vector<PointStats> load_points(const fs::path& dir) {
  std::vector<PointStats> out;
  if (fs::exists(dir / "experiment.json")) {
    const json manifest = json::parse(io::read_text(dir / "experiment.json"));
    for (const auto& p : manifest.at("points")) {
      const fs::path f = dir / p.at("dir").get<std::string>() / "summary.json";
      if (!fs::exists(f)) throw std::runtime_error("missing " + f.string());
      out.push_back(point_stats_from_json(json::parse(io::read_text(f))));
    }
  } else if (fs::exists(dir / "summary.json")) {
    out.push_back(point_stats_from_json(json::parse(io::read_text(dir / "summary.json"))));
  } else {
    throw std::runtime_error(dir.string() + ": neither experiment.json nor summary.json found");
  }
  return out;
}

std::vector<fs::path> figures_for(const fs::path& dir) {
  std::vector<fs::path> out;
  if (fs::exists(dir / "experiment.json")) {
    const json manifest = json::parse(io::read_text(dir / "experiment.json"));
    for (const auto& p : manifest.at("points")) {
      auto f = write_figures(dir / p.at("dir").get<std::string>());
      out.insert(out.end(), f.begin(), f.end());
    }
  } else if (fs::exists(dir / "stats")) {
    out = write_figures(dir);
  } else {
    throw std::runtime_error(dir.string() + ": no experiment.json or stats/ directory");
  }
  return out;
}

namespace {

std::string cell(double mean, double se, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f (%.*f)", prec, mean, prec, se);
  return buf;
}

std::string pad(std::string s, std::size_t w) {
  if (s.size() < w) s.append(w - s.size(), ' ');
  return s;
}

void volatility_table(const std::vector<PointStats>& pts, std::ostream& out, const char* title) {
  out << title << "\n";
  out << pad("point", 14) << pad("sigma_P", 22) << pad("crashes/run", 20) << "mean duration\n";
  for (const auto& p : pts) {
    out << pad(p.label, 14) << pad(cell(p.sigma_p.mean, p.sigma_p.se), 22)
        << pad(cell(p.crash_count.mean, p.crash_count.se, 2), 20)
        << (p.mean_duration.n ? cell(p.mean_duration.mean, p.mean_duration.se, 2) : std::string("-")) << "\n";
  }
  out << "\n";
}

void correlation_table(const PointStats& p, std::ostream& out) {
  for (std::size_t s = 0; s < 2; ++s) {
    out << "Correlation of returns with " << to_string(kSources[s]) << " volume (" << p.label << ")\n";
    out << pad("", 16) << pad("total", 20) << pad("hft", 20) << "lft\n";
    for (std::size_t c = 0; c < 3; ++c) {
      out << pad(std::string(to_string(analytics::kConditions[c])), 16);
      for (std::size_t v = 0; v < 3; ++v) {
        const auto& x = p.correlations[s][c][v];
        const std::string text = x ? cell(x->mean, x->se, 3) : std::string("-");
        out << (v + 1 < 3 ? pad(text, 20) : text);
      }
      out << "\n";
    }
    out << "\n";
  }
}

}  // namespace

int report(const fs::path& dir, std::ostream& out) {
  const std::vector<PointStats> pts = load_points(dir);
  std::vector<PointStats> sweep;
  const PointStats* baseline = nullptr;
  const PointStats* only_lft = nullptr;
  for (const auto& p : pts) {
    if (p.role == Role::Baseline) baseline = &p;
    if (p.role == Role::OnlyLft) only_lft = &p;
    if (p.role == Role::Sweep) sweep.push_back(p);
  }

  std::vector<PointStats> scenarios;
  for (const auto& p : pts)
    if (p.role != Role::Sweep) scenarios.push_back(p);
  if (!scenarios.empty()) volatility_table(scenarios, out, "Volatility and flash-crash statistics");
  for (const auto& p : pts)
    if (p.role == Role::Baseline || p.role == Role::Custom) correlation_table(p, out);
  if (!sweep.empty()) {
    std::sort(sweep.begin(), sweep.end(), [](const auto& a, const auto& b) { return a.gamma_H < b.gamma_H; });
    volatility_table(sweep, out, "HF order lifetime gamma_H, volatility and flash crashes");
  }

  std::vector<acceptance::Verdict> verdicts;
  if (baseline) {
    verdicts.push_back(acceptance::stylized_facts(*baseline));
    verdicts.push_back(acceptance::volatility_bands(*baseline, only_lft));
    verdicts.push_back(acceptance::correlation_signs(*baseline));
    verdicts.push_back(acceptance::anatomy(*baseline));
  } else if (only_lft) {
    verdicts.push_back(acceptance::only_lft_crash_free(*only_lft));
  }
  if (!sweep.empty()) verdicts.push_back(acceptance::gamma_sweep(sweep));

  bool ok = true;
  if (!verdicts.empty()) out << "Acceptance checks\n";
  for (const auto& v : verdicts) {
    out << acceptance::format(v) << "\n";
    ok = ok && v.pass;
  }
  return ok ? 0 : 1;
}

}  // namespace hfabm::experiments
