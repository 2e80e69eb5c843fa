// Command-line front end: wind-model, solve, evaluate, sweep-penetration,
// sweep-investment.

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gep/gep.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode { kOk = 0, kConfigError = 2, kInfeasible = 3, kIoError = 4 };

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  std::optional<int> runs;
  int threads = 1;
  std::optional<int> population;
  std::optional<int> generations;
  std::vector<std::string> exclude;
  std::string regime;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "Config JSON document")->required()->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Override ga.rng_seed");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_option("--runs", o.runs, "Override ga.runs")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Evaluation threads (results do not depend on it)")->check(CLI::PositiveNumber);
  cmd->add_option("--population", o.population, "Override ga.population_size")->check(CLI::PositiveNumber);
  cmd->add_option("--generations", o.generations, "Override ga.generations")->check(CLI::NonNegativeNumber);
  cmd->add_option("--exclude-types", o.exclude, "Unit ids removed from the catalog")->delimiter(',');
  cmd->add_option("--regime", o.regime, "wind.farm_models entry used by the wind unit");
}

gep::Problem load_effective(const CommonOptions& o) {
  gep::Problem p = gep::load_problem(o.config);
  if (o.seed) p.ga.rng_seed = *o.seed;
  if (o.runs) p.ga.runs = *o.runs;
  if (o.population) p.ga.population_size = *o.population;
  if (o.generations) p.ga.generations = *o.generations;
  if (!o.regime.empty()) p = gep::with_regime(p, gep::wind_index(p, ""), o.regime);
  if (!o.exclude.empty()) p = gep::exclude_types(p, o.exclude);
  gep::validate(p);
  return p;
}

gep::Provenance provenance(const gep::Problem& p) { return {p.ga.rng_seed, gep::config_hash(p)}; }

std::string out_path(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw gep::IoError("cannot create output directory '" + dir + "': " + ec.message());
}

std::string hex(std::uint64_t x) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

void write_manifest(const std::string& dir, const std::string& command, const gep::Provenance& prov,
                    const std::vector<std::string>& files, json extra = json::object()) {
  json m = {{"command", command}, {"seed", prov.seed}, {"config_hash", hex(prov.config_hash)}, {"files", files}};
  for (auto& [k, v] : extra.items()) m[k] = v;
  gep::write_text_file(out_path(dir, "manifest.json"), m.dump(2) + "\n");
}

void write_evaluation(const std::string& dir, const gep::Problem& p, const gep::ExpansionPlan& plan,
                      const gep::PlanEvaluation& e, const gep::Provenance& prov) {
  gep::write_text_file(out_path(dir, "plan.csv"), gep::plan_csv(p, plan, prov));
  gep::write_text_file(out_path(dir, "breakdown.csv"), gep::breakdown_csv(e.cost, e.adequacy, prov));
  json b = gep::breakdown_json(e.cost);
  b["penalty"] = e.penalty;
  b["fitness"] = e.fitness;
  gep::write_text_file(out_path(dir, "breakdown.json"), gep::json_with_header(b, prov));
  gep::write_text_file(out_path(dir, "feasibility.json"), gep::json_with_header(gep::feasibility_json(e.feasibility), prov));
}

std::vector<double> parse_list(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    double x = 0.0;
    if (!gep::detail::parse_double(cell, x)) throw gep::InvariantError(std::string("bad ") + what + " value '" + cell + "'");
    out.push_back(x);
  }
  return out;
}

// ---- wind-model --------------------------------------------------------------

struct WindOptions {
  std::string turbine_csv;
  std::string wind_csv;
  std::vector<double> curve;  // v_cut_in, v_rated, v_cut_out, rated_mw
  int levels = 6;
  int turbines = 30;
  double for_rate = 0.1;
  std::string out = ".";
};

int run_wind_model(const WindOptions& o) {
  gep::TurbineOutputModel turbine;
  if (!o.turbine_csv.empty()) {
    turbine.levels = gep::read_levels(o.turbine_csv);
  } else {
    if (o.curve.size() != 4) throw gep::InvariantError("--curve needs v_cut_in,v_rated,v_cut_out,rated_mw");
    const auto curve = gep::fit_power_curve(o.curve[0], o.curve[1], o.curve[2], o.curve[3]);
    turbine = gep::build_turbine_model(curve, gep::read_wind_series(o.wind_csv), o.levels);
    spdlog::info("power curve a={} b={} c={}", curve.a, curve.b, curve.c);
  }
  gep::validate(turbine);
  const auto farm = gep::aggregate_farm(turbine, o.turbines, o.for_rate);
  const gep::Provenance prov{0, gep::fnv1a64(gep::levels_csv(turbine.levels, {}))};

  ensure_dir(o.out);
  gep::write_text_file(out_path(o.out, "turbine_model.csv"), gep::levels_csv(turbine.levels, prov));
  gep::write_text_file(out_path(o.out, "farm_model.csv"), gep::levels_csv(farm.levels, prov));
  json summary = {{"turbine_expected_mw", gep::expected_output(turbine.levels)},
                  {"farm_expected_mw", gep::expected_output(farm)},
                  {"turbine_count", o.turbines},
                  {"for_rate", o.for_rate}};
  gep::write_text_file(out_path(o.out, "summary.json"), gep::json_with_header(summary, prov));
  write_manifest(o.out, "wind-model", prov, {"turbine_model.csv", "farm_model.csv", "summary.json"});
  spdlog::info("farm expected output {:.6f} MW", gep::expected_output(farm));
  std::printf("farm_expected_mw=%.6f\n", gep::expected_output(farm));
  return kOk;
}

// ---- solve / evaluate -------------------------------------------------------

int run_solve(const CommonOptions& o) {
  const gep::Problem p = load_effective(o);
  const auto prov = provenance(p);
  ensure_dir(o.out);
  const auto start = std::chrono::steady_clock::now();
  const gep::MultiRunResult r = gep::multi_run(p, p.ga, {o.threads});
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  spdlog::info("solve finished in {:.2f} s, best fitness {:.6f}", secs, r.best.best.fitness);

  write_evaluation(o.out, p, r.best.best_plan, r.best.best, prov);
  gep::write_text_file(out_path(o.out, "history.csv"), gep::history_csv(r.best.history, prov));
  std::string runs = gep::header_line(prov) + "run,seed,best_fitness,best_total,feasible\n";
  for (std::size_t k = 0; k < r.runs.size(); ++k)
    runs += std::to_string(k) + "," + std::to_string(r.runs[k].seed) + "," + gep::format_double(r.runs[k].best_fitness) +
            "," + gep::format_double(r.runs[k].best_total) + "," + (r.runs[k].feasible ? "1" : "0") + "\n";
  gep::write_text_file(out_path(o.out, "runs.csv"), runs);
  write_manifest(o.out, "solve", prov,
                 {"plan.csv", "breakdown.csv", "breakdown.json", "feasibility.json", "history.csv", "runs.csv"},
                 {{"best_run", r.best_run}, {"feasible", r.best.best.feasibility.feasible()}});

  std::printf("total_cost=%.6f operational_cost=%.6f feasible=%d\n", r.best.best.cost.total,
              r.best.best.cost.operational(), r.best.best.feasibility.feasible() ? 1 : 0);
  return r.best.best.feasibility.feasible() ? kOk : kInfeasible;
}

int run_evaluate(const CommonOptions& o, const std::string& plan_path) {
  const gep::Problem p = load_effective(o);
  const auto prov = provenance(p);
  const gep::ExpansionPlan plan = gep::read_plan(p, plan_path);
  ensure_dir(o.out);
  const gep::Evaluator ev(p);
  const auto e = ev.evaluate(plan);
  write_evaluation(o.out, p, plan, e, prov);
  write_manifest(o.out, "evaluate", prov, {"plan.csv", "breakdown.csv", "breakdown.json", "feasibility.json"},
                 {{"feasible", e.feasibility.feasible()}});
  if (const auto* v = e.feasibility.first_violation())
    spdlog::warn("plan violates {} at stage {} ({})", gep::to_string(v->kind), v->stage + 1, v->subject);
  std::printf("total_cost=%.6f operational_cost=%.6f feasible=%d\n", e.cost.total, e.cost.operational(),
              e.feasibility.feasible() ? 1 : 0);
  return kOk;
}

// ---- sweeps -------------------------------------------------------------------

int run_sweep_cmd(const CommonOptions& o, gep::SweepMode mode, const std::string& values) {
  gep::Problem p = load_effective(o);
  const auto prov = provenance(p);
  gep::SweepSpec spec;
  spec.mode = mode;
  spec.values = parse_list(values, mode == gep::SweepMode::Penetration ? "--farms" : "--ci");
  ensure_dir(o.out);

  const auto start = std::chrono::steady_clock::now();
  const gep::ExperimentResult res = gep::run_sweep(p, spec, {o.threads});
  spdlog::info("sweep finished in {:.2f} s",
               std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

  const int T = p.stage_count();
  std::string csv = gep::header_line(prov) + "input,penetration_pct,total_cost,operational_cost,fitness,feasible,"
                                             "lolp_violated,violation_kind,violation_stage";
  for (int t = 0; t < T; ++t) csv += ",lolp_" + std::to_string(t + 1);
  for (int t = 0; t < T; ++t) csv += ",wind_units_" + std::to_string(t + 1);
  csv += "\n";
  std::string plans = gep::header_line(prov) + "input,stage";
  for (const auto& u : p.units) plans += "," + u.id;
  plans += "\n";
  for (const auto& pt : res.points) {
    csv += gep::format_double(pt.input) + "," + gep::format_double(pt.penetration_pct) + "," +
           gep::format_double(pt.total_cost) + "," + gep::format_double(pt.operational_cost) + "," +
           gep::format_double(pt.fitness) + "," + (pt.feasible ? "1" : "0") + "," + (pt.lolp_violated ? "1" : "0") +
           "," + pt.violation_kind + "," + std::to_string(pt.violation_stage);
    for (double l : pt.lolp) csv += "," + gep::format_double(l);
    for (int w : pt.wind_units) csv += "," + std::to_string(w);
    csv += "\n";
    for (int t = 0; t < T; ++t) {
      plans += gep::format_double(pt.input) + "," + std::to_string(t + 1);
      for (int i = 0; i < pt.plan.types(); ++i) plans += "," + std::to_string(pt.plan(t, i));
      plans += "\n";
    }
    spdlog::info("{}={} total={:.3f} operational={:.3f} feasible={}", gep::to_string(mode), pt.input, pt.total_cost,
                 pt.operational_cost, pt.feasible);
  }
  gep::write_text_file(out_path(o.out, "sweep.csv"), csv);
  gep::write_text_file(out_path(o.out, "sweep_plans.csv"), plans);

  json extra = {{"mode", std::string(gep::to_string(mode))}, {"regime", o.regime}};
  if (const auto k = res.first_lolp_violation()) extra["first_lolp_violation"] = res.points[*k].input;
  if (const auto w = res.max_feasible_input()) extra["max_feasible_input"] = *w;
  write_manifest(o.out, mode == gep::SweepMode::Penetration ? "sweep-penetration" : "sweep-investment", prov,
                 {"sweep.csv", "sweep_plans.csv"}, extra);

  const bool any = std::any_of(res.points.begin(), res.points.end(), [](const auto& pt) { return pt.feasible; });
  return any ? kOk : kInfeasible;
}

void configure_logging() {
  auto logger = spdlog::stderr_color_mt("gep");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("GEP_LOG")) spdlog::set_level(spdlog::level::from_str(env));
}

}  // namespace

int main(int argc, char** argv) {
  configure_logging();
  CLI::App app{"Generation expansion planning with multi-state wind farms"};
  app.require_subcommand(1);

  WindOptions wind;
  auto* wind_cmd = app.add_subcommand("wind-model", "Build turbine and farm output models");
  wind_cmd->add_option("--turbine-model", wind.turbine_csv, "Turbine model CSV (power_mw,probability)")
      ->check(CLI::ExistingFile);
  wind_cmd->add_option("--wind", wind.wind_csv, "Wind speed CSV (m/s, last column)")->check(CLI::ExistingFile);
  wind_cmd->add_option("--curve", wind.curve, "v_cut_in,v_rated,v_cut_out,rated_mw")->delimiter(',');
  wind_cmd->add_option("--levels", wind.levels, "Turbine output levels")->check(CLI::Range(2, 1000));
  wind_cmd->add_option("--turbines", wind.turbines, "Turbines per farm")->check(CLI::PositiveNumber);
  wind_cmd->add_option("--for", wind.for_rate, "Turbine forced outage rate")->check(CLI::Range(0.0, 1.0));
  wind_cmd->add_option("--out", wind.out, "Output directory");

  CommonOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Search for the least-cost plan");
  add_common(solve_cmd, solve);

  CommonOptions eval;
  std::string plan_path;
  auto* eval_cmd = app.add_subcommand("evaluate", "Cost and feasibility of a given plan");
  add_common(eval_cmd, eval);
  eval_cmd->add_option("--plan", plan_path, "Plan CSV (stage,<unit ids>)")->required()->check(CLI::ExistingFile);

  CommonOptions pen;
  std::string farms = "0,2,4,6,8,10";
  auto* pen_cmd = app.add_subcommand("sweep-penetration", "Fixed wind farms per stage until LOLP fails");
  add_common(pen_cmd, pen);
  pen_cmd->add_option("--farms", farms, "Farms added per stage, comma separated");

  CommonOptions inv;
  std::string cis = "1650,1575,1485,1402,1320";
  auto* inv_cmd = app.add_subcommand("sweep-investment", "Wind investment-cost sensitivity");
  add_common(inv_cmd, inv);
  inv_cmd->add_option("--ci", cis, "Wind investment costs per kW, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kConfigError;
  }

  try {
    if (*wind_cmd) return run_wind_model(wind);
    if (*solve_cmd) return run_solve(solve);
    if (*eval_cmd) return run_evaluate(eval, plan_path);
    if (*pen_cmd) return run_sweep_cmd(pen, gep::SweepMode::Penetration, farms);
    if (*inv_cmd) return run_sweep_cmd(inv, gep::SweepMode::Investment, cis);
  } catch (const gep::IoError& e) {
    spdlog::error("{}", e.what());
    return kIoError;
  } catch (const gep::ConfigError& e) {
    spdlog::error("config error at {}", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    spdlog::error("{}", e.what());
    return kConfigError;
  }
  return kOk;
}
