#pragma once

// Experiments built on multi_run: plan comparison with or without wind,
// fixed wind-penetration sweeps, and wind investment-cost sweeps.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "gep/ga_engine.hpp"
#include "gep/planning_model.hpp"

namespace gep {

enum class SweepMode { Penetration, Investment };

inline constexpr std::string_view to_string(SweepMode m) {
  return m == SweepMode::Penetration ? "penetration" : "investment";
}

struct SweepSpec {
  SweepMode mode = SweepMode::Penetration;
  std::vector<double> values;  // farms per stage, or wind CI in currency/kW
  std::string regime;          // farm model name; empty keeps the config's model
  std::string wind_id;         // wind unit id; empty selects the first wind unit
};

inline void validate(const SweepSpec& spec) {
  if (spec.values.empty()) throw InvariantError("sweep: empty value list");
  for (double v : spec.values) {
    if (spec.mode == SweepMode::Penetration && (v < 0 || v != static_cast<double>(static_cast<int>(v))))
      throw InvariantError("sweep: farm counts must be non-negative integers");
    if (spec.mode == SweepMode::Investment && !(v > 0)) throw InvariantError("sweep: investment costs must be > 0");
  }
}

struct SweepPoint {
  double input = 0.0;
  double total_cost = 0.0;
  double operational_cost = 0.0;
  double fitness = 0.0;
  std::vector<double> lolp;  // per stage
  bool feasible = false;
  bool lolp_violated = false;
  std::string violation_kind;  // first violation, empty when feasible
  int violation_stage = 0;     // 1-based, 0 when feasible
  std::vector<int> wind_units;  // wind units added per stage (plan + fixed)
  double penetration_pct = 0.0;
  ExpansionPlan plan;
};

struct ExperimentResult {
  SweepMode mode = SweepMode::Penetration;
  std::string regime;
  std::vector<SweepPoint> points;

  /// Index of the first point whose best plan violates the LOLP bound.
  std::optional<std::size_t> first_lolp_violation() const {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (points[k].lolp_violated) return k;
    return std::nullopt;
  }

  /// Index of the first point whose best plan violates any constraint.
  std::optional<std::size_t> first_infeasible() const {
    for (std::size_t k = 0; k < points.size(); ++k)
      if (!points[k].feasible) return k;
    return std::nullopt;
  }

  /// Largest input over the leading run of feasible points (inputs in spec
  /// order); empty when the first point is already infeasible.
  std::optional<double> max_feasible_input() const {
    const std::size_t end = first_infeasible().value_or(points.size());
    if (end == 0) return std::nullopt;
    double best = points[0].input;
    for (std::size_t k = 0; k < end; ++k) best = std::max(best, points[k].input);
    return best;
  }
};

inline int wind_index(const Problem& p, const std::string& wind_id) {
  if (!wind_id.empty()) {
    const auto i = p.index_of(wind_id);
    if (!i) throw InvariantError("unknown unit id '" + wind_id + "'");
    if (p.unit(*i).kind != UnitKind::Wind) throw InvariantError("unit '" + wind_id + "' is not a wind unit");
    return *i;
  }
  for (int i = 0; i < p.type_count(); ++i)
    if (p.unit(i).kind == UnitKind::Wind) return i;
  throw InvariantError("problem has no wind unit");
}

/// Copy of the problem with the given unit types removed.
inline Problem exclude_types(const Problem& p, const std::vector<std::string>& ids) {
  for (const auto& id : ids)
    if (!p.index_of(id)) throw InvariantError("cannot exclude unknown unit id '" + id + "'");
  std::vector<int> keep;
  for (int i = 0; i < p.type_count(); ++i)
    if (std::find(ids.begin(), ids.end(), p.unit(i).id) == ids.end()) keep.push_back(i);
  if (keep.empty()) throw InvariantError("cannot exclude every unit type");

  Problem q = p;
  const int T = p.stage_count(), N = static_cast<int>(keep.size());
  q.units.clear();
  q.constraints.u_max = StageMatrix<int>(T, N, 0);
  q.constraints.u_min = StageMatrix<int>(T, N, 0);
  q.forced_builds = StageMatrix<int>(T, N, 0);
  for (int k = 0; k < N; ++k) {
    const int i = keep[static_cast<std::size_t>(k)];
    q.units.push_back(p.unit(i));
    for (int t = 0; t < T; ++t) {
      q.constraints.u_max(t, k) = p.constraints.u_max(t, i);
      q.constraints.u_min(t, k) = p.constraints.u_min(t, i);
      q.forced_builds(t, k) = p.forced_builds(t, i);
    }
  }
  validate(q);
  return q;
}

/// Points the wind unit at the named farm model.
inline Problem with_regime(const Problem& p, int wind, const std::string& regime) {
  if (regime.empty()) return p;
  const auto it = p.wind_models.find(regime);
  if (it == p.wind_models.end()) throw InvariantError("no farm model named '" + regime + "'");
  Problem q = p;
  q.units[static_cast<std::size_t>(wind)].farm_model_name = regime;
  q.units[static_cast<std::size_t>(wind)].farm_model = it->second.farm;
  validate(q);
  return q;
}

/// Adds `farms` wind units in every stage as exogenous builds and removes
/// wind from the gene space.
inline Problem with_fixed_wind(const Problem& p, int wind, int farms) {
  Problem q = p;
  for (int t = 0; t < p.stage_count(); ++t) {
    q.constraints.u_max(t, wind) = 0;
    q.constraints.u_min(t, wind) = 0;
    q.forced_builds(t, wind) = farms;
  }
  validate(q);
  return q;
}

inline Problem with_wind_investment(const Problem& p, int wind, double invest_cost_per_kw) {
  Problem q = p;
  q.units[static_cast<std::size_t>(wind)].invest_cost_per_kw = invest_cost_per_kw;
  validate(q);
  return q;
}

/// Horizon-end wind nameplate as a percentage of the final-stage peak.
inline double penetration_percent(const Problem& p, const ExpansionPlan& plan) {
  const CumulativeState x = cumulative_state(p, plan);
  const int last = p.stage_count() - 1;
  double wind_mw = 0.0;
  for (int i = 0; i < p.type_count(); ++i)
    if (p.unit(i).kind == UnitKind::Wind) wind_mw += x(last, i) - p.unit(i).existing_mw();
  return 100.0 * wind_mw / p.horizon.peak_load_mw.back();
}

inline SweepPoint summarize_point(const Problem& p, double input, const GARunResult& run) {
  SweepPoint pt;
  pt.input = input;
  pt.plan = run.best_plan;
  pt.total_cost = run.best.cost.total;
  pt.operational_cost = run.best.cost.operational();
  pt.fitness = run.best.fitness;
  pt.lolp = run.best.feasibility.lolp_by_stage();
  pt.feasible = run.best.feasibility.feasible();
  pt.lolp_violated = run.best.feasibility.violation_total(ConstraintKind::Lolp) > 0.0;
  if (const auto* v = run.best.feasibility.first_violation()) {
    pt.violation_kind = std::string(to_string(v->kind));
    pt.violation_stage = v->stage + 1;
  }
  const ExpansionPlan all = total_builds(p, run.best_plan);
  pt.wind_units.assign(static_cast<std::size_t>(p.stage_count()), 0);
  for (int t = 0; t < p.stage_count(); ++t)
    for (int i = 0; i < p.type_count(); ++i)
      if (p.unit(i).kind == UnitKind::Wind) pt.wind_units[static_cast<std::size_t>(t)] += all(t, i);
  pt.penetration_pct = penetration_percent(p, run.best_plan);
  return pt;
}

/// The problem solved at one sweep point.
inline Problem sweep_problem(const Problem& base, const SweepSpec& spec, double value) {
  const int wind = wind_index(base, spec.wind_id);
  const Problem regime = with_regime(base, wind, spec.regime);
  if (spec.mode == SweepMode::Penetration) return with_fixed_wind(regime, wind, static_cast<int>(value));
  return with_wind_investment(regime, wind, value);
}

/// One multi_run per spec point, in spec order.
inline ExperimentResult run_sweep(const Problem& base, const SweepSpec& spec, ExecutionOptions exec = {}) {
  validate(spec);
  ExperimentResult out;
  out.mode = spec.mode;
  out.regime = spec.regime;
  for (double v : spec.values) {
    const Problem p = sweep_problem(base, spec, v);
    const MultiRunResult r = multi_run(p, p.ga, exec);
    out.points.push_back(summarize_point(p, v, r.best));
  }
  return out;
}

}  // namespace gep
