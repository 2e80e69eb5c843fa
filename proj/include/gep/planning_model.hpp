#pragma once

// Problem definition: unit catalog, horizon, economics, constraint and
// search settings, plus the plan / cumulative-state algebra.

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gep/load_model.hpp"
#include "gep/wind_model.hpp"

namespace gep {

enum class UnitKind { Thermal, Wind };
enum class FuelClass { Oil, Lng, Coal, Pwr, Phwr, Wind };

inline constexpr std::string_view to_string(UnitKind kind) {
  return kind == UnitKind::Thermal ? "thermal" : "wind";
}

inline constexpr std::string_view to_string(FuelClass fc) {
  switch (fc) {
    case FuelClass::Oil: return "OIL";
    case FuelClass::Lng: return "LNG";
    case FuelClass::Coal: return "COAL";
    case FuelClass::Pwr: return "PWR";
    case FuelClass::Phwr: return "PHWR";
    case FuelClass::Wind: return "WIND";
  }
  return "?";
}

inline std::optional<FuelClass> parse_fuel_class(std::string_view s) {
  for (auto fc : {FuelClass::Oil, FuelClass::Lng, FuelClass::Coal, FuelClass::Pwr, FuelClass::Phwr, FuelClass::Wind})
    if (to_string(fc) == s) return fc;
  return std::nullopt;
}

/// Dense stages x types matrix, row-major.
template <class T>
class StageMatrix {
 public:
  StageMatrix() = default;
  StageMatrix(int stages, int types, T fill = T{})
      : stages_(stages), types_(types), data_(static_cast<std::size_t>(stages) * types, fill) {
    if (stages < 0 || types < 0) throw std::invalid_argument("negative matrix dimension");
  }

  int stages() const { return stages_; }
  int types() const { return types_; }
  std::size_t size() const { return data_.size(); }

  T& operator()(int t, int i) { return data_[index(t, i)]; }
  const T& operator()(int t, int i) const { return data_[index(t, i)]; }

  std::span<T> row(int t) { return {data_.data() + static_cast<std::size_t>(t) * types_, static_cast<std::size_t>(types_)}; }
  std::span<const T> row(int t) const {
    return {data_.data() + static_cast<std::size_t>(t) * types_, static_cast<std::size_t>(types_)};
  }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

  bool same_shape(const StageMatrix& o) const { return stages_ == o.stages_ && types_ == o.types_; }
  bool operator==(const StageMatrix&) const = default;

 private:
  std::size_t index(int t, int i) const {
    return static_cast<std::size_t>(t) * static_cast<std::size_t>(types_) + static_cast<std::size_t>(i);
  }

  int stages_ = 0;
  int types_ = 0;
  std::vector<T> data_;
};

/// Units built per stage and type (the chromosome).
using ExpansionPlan = StageMatrix<int>;

/// Installed MW per stage and type, existing units included.
using CumulativeState = StageMatrix<double>;

struct UnitType {
  std::string id;
  UnitKind kind = UnitKind::Thermal;
  FuelClass fuel_class = FuelClass::Oil;
  double unit_capacity_mw = 0.0;
  double for_rate = 0.0;
  double invest_cost_per_kw = 0.0;    // currency / kW
  double fixed_om_per_mw_year = 0.0;  // currency / MW / year
  double variable_om_per_kwh = 0.0;   // currency / kWh
  double salvage_factor = 0.0;
  std::vector<double> salvage_factor_by_stage;  // optional per-stage override
  bool candidate = false;
  int existing_units = 0;
  std::string farm_model_name;  // key into Problem::wind_models
  std::optional<FarmOutputModel> farm_model;

  // Internal currency is millions (M); energy in MWh.
  double invest_m_per_mw() const { return invest_cost_per_kw * 1e-3; }
  double fixed_om_m_per_mw_year() const { return fixed_om_per_mw_year * 1e-6; }
  double variable_om_m_per_mwh() const { return variable_om_per_kwh * 1e-3; }
  double existing_mw() const { return existing_units * unit_capacity_mw; }

  double salvage_at(int stage) const {
    if (!salvage_factor_by_stage.empty()) return salvage_factor_by_stage.at(static_cast<std::size_t>(stage));
    return salvage_factor;
  }

  /// MW credited to the merit-order stack per installed MW.
  double dispatch_credit_ratio() const {
    if (kind == UnitKind::Wind && farm_model) return expected_output(*farm_model) / unit_capacity_mw;
    return 1.0;
  }

  bool operator==(const UnitType&) const = default;
};

struct PlanningHorizon {
  int stage_count = 1;
  int years_per_stage = 1;
  double lead_time_years = 0.0;
  double hours_per_year = 8760.0;
  std::vector<double> peak_load_mw;
  double base_load_ratio = 0.5;
  std::optional<LdcBreakpoint> ldc_breakpoint;

  /// Years from the base year to the start of stage t (0-based).
  double stage_start_years(int t) const { return lead_time_years + static_cast<double>(years_per_stage) * t; }
  /// Years from the base year to the end of the horizon.
  double end_years() const { return lead_time_years + static_cast<double>(years_per_stage) * stage_count; }

  LoadDurationCurve ldc(int t) const {
    return build_ldc(peak_load_mw.at(static_cast<std::size_t>(t)), base_load_ratio, hours_per_year, ldc_breakpoint);
  }

  bool operator==(const PlanningHorizon&) const = default;
};

struct EconomicParams {
  double discount_rate = 0.0;
  double ceens_per_kwh = 0.0;  // value of unserved energy, currency / kWh

  double ceens_m_per_mwh() const { return ceens_per_kwh * 1e-3; }
  bool operator==(const EconomicParams&) const = default;
};

struct FuelBand {
  double min = 0.0;
  double max = 1.0;
  bool operator==(const FuelBand&) const = default;
};

struct ConstraintParams {
  StageMatrix<int> u_max;
  StageMatrix<int> u_min;
  std::map<FuelClass, FuelBand> fuel_mix;
  double reserve_min = 0.0;
  double reserve_max = 1.0;
  double lolp_max = 1.0;

  bool operator==(const ConstraintParams&) const = default;
};

struct ReliabilitySettings {
  double capacity_step_mw = 1.0;
  double prune_threshold = 1e-10;

  bool operator==(const ReliabilitySettings&) const = default;
};

struct CrossoverProbs {
  double one_point = 0.70;
  double two_point = 0.15;
  double substring = 0.15;

  bool operator==(const CrossoverProbs&) const = default;
};

/// Penalty weight per normalized violation unit, by constraint kind.
/// Unset weights default to 10x the largest single-stage investment.
struct PenaltyWeights {
  std::optional<double> build_limit;
  std::optional<double> fuel_mix;
  std::optional<double> reserve;
  std::optional<double> lolp;

  bool operator==(const PenaltyWeights&) const = default;
};

struct GAConfig {
  int population_size = 300;
  int generations = 150;
  double crossover_fraction = 0.60;
  CrossoverProbs crossover_type_probs;
  int mutants_per_generation = 3;
  int elite_count = 3;
  PenaltyWeights penalty_weights;
  std::uint64_t rng_seed = 1;
  int runs = 1;
  int repair_attempts = 20;

  bool operator==(const GAConfig&) const = default;
};

inline void validate(const GAConfig& ga) {
  if (ga.population_size < 1) throw InvariantError("ga.population_size must be >= 1");
  if (ga.generations < 0) throw InvariantError("ga.generations must be >= 0");
  if (!(ga.crossover_fraction >= 0.0 && ga.crossover_fraction <= 1.0))
    throw InvariantError("ga.crossover_fraction must lie in [0, 1]");
  const auto& p = ga.crossover_type_probs;
  if (p.one_point < 0 || p.two_point < 0 || p.substring < 0 ||
      std::abs(p.one_point + p.two_point + p.substring - 1.0) > 1e-12)
    throw InvariantError("ga.crossover_type_probs must be non-negative and sum to 1");
  if (ga.mutants_per_generation < 0 || ga.elite_count < 0 ||
      ga.elite_count + ga.mutants_per_generation > ga.population_size)
    throw InvariantError("ga: elite_count + mutants_per_generation must not exceed population_size");
  if (ga.runs < 1) throw InvariantError("ga.runs must be >= 1");
  if (ga.repair_attempts < 1) throw InvariantError("ga.repair_attempts must be >= 1");
}

/// A named wind farm model as declared in the config: either a turbine
/// model to aggregate or a ready farm model.
struct WindModelEntry {
  std::optional<TurbineOutputModel> turbine;
  FarmOutputModel farm;

  bool operator==(const WindModelEntry&) const = default;
};

struct Problem {
  std::vector<UnitType> units;
  PlanningHorizon horizon;
  EconomicParams economics;
  ConstraintParams constraints;
  ReliabilitySettings reliability;
  GAConfig ga;
  std::map<std::string, WindModelEntry> wind_models;
  /// Exogenous builds outside the gene space (e.g. fixed wind additions).
  ExpansionPlan forced_builds;

  int type_count() const { return static_cast<int>(units.size()); }
  int stage_count() const { return horizon.stage_count; }

  std::optional<int> index_of(std::string_view id) const {
    for (int i = 0; i < type_count(); ++i)
      if (units[static_cast<std::size_t>(i)].id == id) return i;
    return std::nullopt;
  }

  const UnitType& unit(int i) const { return units.at(static_cast<std::size_t>(i)); }

  ExpansionPlan zero_plan() const { return ExpansionPlan(stage_count(), type_count(), 0); }

  bool operator==(const Problem&) const = default;
};

inline void validate(const UnitType& u) {
  const std::string who = "unit '" + u.id + "': ";
  if (u.id.empty()) throw InvariantError("unit with empty id");
  if (!(u.unit_capacity_mw > 0.0)) throw InvariantError(who + "unit_capacity_mw must be > 0");
  if (!(u.for_rate >= 0.0 && u.for_rate < 1.0)) throw InvariantError(who + "for_rate must lie in [0, 1)");
  if (!(u.salvage_factor >= 0.0 && u.salvage_factor < 1.0))
    throw InvariantError(who + "salvage_factor must lie in [0, 1)");
  for (double s : u.salvage_factor_by_stage)
    if (!(s >= 0.0 && s < 1.0)) throw InvariantError(who + "salvage_factor_by_stage entries must lie in [0, 1)");
  if (u.invest_cost_per_kw < 0 || u.fixed_om_per_mw_year < 0 || u.variable_om_per_kwh < 0)
    throw InvariantError(who + "costs must be non-negative");
  if (u.existing_units < 0) throw InvariantError(who + "existing_units must be >= 0");
  if ((u.kind == UnitKind::Wind) != u.farm_model.has_value())
    throw InvariantError(who + "farm model must be present exactly for wind units");
  if (u.farm_model) {
    validate(*u.farm_model);
    if (u.farm_model->levels.back().power_mw > u.unit_capacity_mw * (1 + 1e-9))
      throw InvariantError(who + "farm model exceeds unit capacity");
  }
}

inline void validate(const Problem& p) {
  const auto& h = p.horizon;
  if (h.stage_count < 1) throw InvariantError("horizon.stage_count must be >= 1");
  if (h.years_per_stage < 1) throw InvariantError("horizon.years_per_stage must be >= 1");
  if (!(h.hours_per_year > 0)) throw InvariantError("horizon.hours_per_year must be > 0");
  if (static_cast<int>(h.peak_load_mw.size()) != h.stage_count)
    throw InvariantError("horizon.peak_load_mw must have stage_count entries");
  for (double d : h.peak_load_mw)
    if (!(d > 0)) throw InvariantError("horizon.peak_load_mw entries must be > 0");
  if (!(h.base_load_ratio > 0 && h.base_load_ratio <= 1)) throw InvariantError("horizon.base_load_ratio must lie in (0, 1]");
  if (h.ldc_breakpoint) (void)h.ldc(0);

  if (p.units.empty()) throw InvariantError("no unit types");
  for (const auto& u : p.units) {
    validate(u);
    if (!u.salvage_factor_by_stage.empty() && static_cast<int>(u.salvage_factor_by_stage.size()) != h.stage_count)
      throw InvariantError("unit '" + u.id + "': salvage_factor_by_stage must have stage_count entries");
  }
  for (std::size_t i = 0; i < p.units.size(); ++i)
    for (std::size_t j = i + 1; j < p.units.size(); ++j)
      if (p.units[i].id == p.units[j].id) throw InvariantError("duplicate unit id '" + p.units[i].id + "'");

  if (!(p.economics.discount_rate > -1.0)) throw InvariantError("economics.discount_rate must be > -1");
  if (!(p.economics.ceens_per_kwh >= 0.0)) throw InvariantError("economics.ceens_per_kwh must be >= 0");

  const auto& c = p.constraints;
  const int T = p.stage_count(), N = p.type_count();
  if (c.u_max.stages() != T || c.u_max.types() != N || c.u_min.stages() != T || c.u_min.types() != N)
    throw InvariantError("constraints: build limit matrices must be stage_count x type_count");
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < N; ++i) {
      if (c.u_min(t, i) < 0 || c.u_max(t, i) < c.u_min(t, i))
        throw InvariantError("constraints: require 0 <= u_min <= u_max for '" + p.unit(i).id + "'");
      if (!p.unit(i).candidate && c.u_max(t, i) != 0)
        throw InvariantError("constraints: existing-only unit '" + p.unit(i).id + "' cannot have u_max > 0");
    }
  for (const auto& [fc, band] : c.fuel_mix)
    if (!(band.min >= 0 && band.min <= band.max && band.max <= 1))
      throw InvariantError("constraints: fuel mix band for " + std::string(to_string(fc)) + " must satisfy 0 <= min <= max <= 1");
  if (!(c.reserve_min > -1 && c.reserve_min <= c.reserve_max))
    throw InvariantError("constraints: require -1 < reserve_min <= reserve_max");
  if (!(c.lolp_max > 0 && c.lolp_max <= 1)) throw InvariantError("constraints: lolp_max must lie in (0, 1]");

  if (!(p.reliability.capacity_step_mw > 0)) throw InvariantError("reliability.capacity_step_mw must be > 0");
  if (!(p.reliability.prune_threshold >= 0 && p.reliability.prune_threshold < 1))
    throw InvariantError("reliability.prune_threshold must lie in [0, 1)");

  validate(p.ga);

  if (p.forced_builds.stages() != T || p.forced_builds.types() != N)
    throw InvariantError("forced builds must be stage_count x type_count");
  for (int v : p.forced_builds.data())
    if (v < 0) throw InvariantError("forced builds must be non-negative");
}

/// X[t] = existing + all builds through stage t, in MW.
inline CumulativeState cumulative_state(const ExpansionPlan& plan, std::span<const double> unit_capacity_mw,
                                        std::span<const double> existing_mw) {
  const int T = plan.stages(), N = plan.types();
  if (static_cast<int>(unit_capacity_mw.size()) != N || static_cast<int>(existing_mw.size()) != N)
    throw std::invalid_argument("cumulative_state: plan has " + std::to_string(N) + " types, catalog has " +
                                std::to_string(unit_capacity_mw.size()));
  CumulativeState x(T, N, 0.0);
  for (int t = 0; t < T; ++t)
    for (int i = 0; i < N; ++i) {
      const double prev = t == 0 ? existing_mw[static_cast<std::size_t>(i)] : x(t - 1, i);
      x(t, i) = prev + plan(t, i) * unit_capacity_mw[static_cast<std::size_t>(i)];
    }
  return x;
}

inline void check_plan_shape(const Problem& p, const ExpansionPlan& plan) {
  if (plan.stages() != p.stage_count() || plan.types() != p.type_count())
    throw std::invalid_argument("plan is " + std::to_string(plan.stages()) + "x" + std::to_string(plan.types()) +
                                ", problem expects " + std::to_string(p.stage_count()) + "x" +
                                std::to_string(p.type_count()));
}

/// Plan builds plus the problem's exogenous builds.
inline ExpansionPlan total_builds(const Problem& p, const ExpansionPlan& plan) {
  check_plan_shape(p, plan);
  ExpansionPlan all = plan;
  for (std::size_t k = 0; k < all.size(); ++k) all.data()[k] += p.forced_builds.data()[k];
  return all;
}

/// Cumulative installed MW including existing units and forced builds.
inline CumulativeState cumulative_state(const Problem& p, const ExpansionPlan& plan) {
  std::vector<double> caps, existing;
  for (const auto& u : p.units) {
    caps.push_back(u.unit_capacity_mw);
    existing.push_back(u.existing_mw());
  }
  return cumulative_state(total_builds(p, plan), caps, existing);
}

}  // namespace gep
