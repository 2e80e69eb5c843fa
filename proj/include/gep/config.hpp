#pragma once

// JSON config document <-> Problem. Unknown keys are rejected so typos
// surface as errors naming the offending path.

#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gep/planning_model.hpp"
#include "gep/wind_model.hpp"

namespace gep {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(std::move(path)) {}

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

namespace detail {

using nlohmann::json;

inline void allow_keys(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) throw ConfigError(path, "expected an object");
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [k, v] : obj.items())
    if (!allowed.count(k)) throw ConfigError(path + "." + k, "unknown key");
}

inline const json& require(const json& obj, const std::string& path, const char* key) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(path + "." + key, "missing required key");
  return *it;
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  return v.get<double>();
}

inline int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
    throw ConfigError(path, "integer out of range");
  return static_cast<int>(x);
}

inline std::uint64_t as_u64(const json& v, const std::string& path) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    throw ConfigError(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

inline std::string as_string(const json& v, const std::string& path) {
  if (!v.is_string()) throw ConfigError(path, "expected a string");
  return v.get<std::string>();
}

inline bool as_bool(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected a boolean");
  return v.get<bool>();
}

inline double number_or(const json& obj, const std::string& path, const char* key, double fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, path + "." + key);
}

inline int int_or(const json& obj, const std::string& path, const char* key, int fallback) {
  const auto it = obj.find(key);
  return it == obj.end() ? fallback : as_int(*it, path + "." + key);
}

inline std::vector<double> number_list(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_number(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

/// An integer applied to every stage, or a per-stage list.
inline std::vector<int> stage_ints(const json& v, const std::string& path, int stages) {
  if (v.is_number_integer()) return std::vector<int>(static_cast<std::size_t>(stages), as_int(v, path));
  if (!v.is_array()) throw ConfigError(path, "expected an integer or a per-stage array");
  if (static_cast<int>(v.size()) != stages)
    throw ConfigError(path, "expected " + std::to_string(stages) + " entries, got " + std::to_string(v.size()));
  std::vector<int> out;
  for (std::size_t k = 0; k < v.size(); ++k) out.push_back(as_int(v[k], path + "[" + std::to_string(k) + "]"));
  return out;
}

inline std::vector<OutputLevel> parse_levels(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of levels");
  std::vector<OutputLevel> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string p = path + "[" + std::to_string(k) + "]";
    allow_keys(v[k], p, {"power_mw", "probability"});
    out.push_back({as_number(require(v[k], p, "power_mw"), p + ".power_mw"),
                   as_number(require(v[k], p, "probability"), p + ".probability")});
  }
  return out;
}

inline json levels_to_json(const std::vector<OutputLevel>& levels) {
  json arr = json::array();
  for (const auto& l : levels) arr.push_back({{"power_mw", l.power_mw}, {"probability", l.probability}});
  return arr;
}

inline WindModelEntry parse_wind_model(const json& v, const std::string& path) {
  allow_keys(v, path, {"turbine_model", "turbine_count", "for_rate", "levels"});
  WindModelEntry e;
  try {
    if (v.contains("turbine_model")) {
      if (v.contains("levels")) throw ConfigError(path, "give either turbine_model or levels, not both");
      TurbineOutputModel turbine{parse_levels(require(v, path, "turbine_model"), path + ".turbine_model")};
      validate(turbine);
      const int n = as_int(require(v, path, "turbine_count"), path + ".turbine_count");
      const double f = as_number(require(v, path, "for_rate"), path + ".for_rate");
      e.farm = aggregate_farm(turbine, n, f);
      e.turbine = std::move(turbine);
    } else {
      e.farm.levels = parse_levels(require(v, path, "levels"), path + ".levels");
      e.farm.turbine_count = int_or(v, path, "turbine_count", 1);
      e.farm.for_rate = number_or(v, path, "for_rate", 0.0);
      validate(e.farm);
    }
  } catch (const InvariantError& err) {
    throw ConfigError(path, err.what());
  }
  return e;
}

inline json wind_model_to_json(const WindModelEntry& e) {
  json j;
  if (e.turbine) {
    j["turbine_model"] = levels_to_json(e.turbine->levels);
  } else {
    j["levels"] = levels_to_json(e.farm.levels);
  }
  j["turbine_count"] = e.farm.turbine_count;
  j["for_rate"] = e.farm.for_rate;
  return j;
}

inline UnitKind parse_kind(const json& v, const std::string& path) {
  const std::string s = as_string(v, path);
  if (s == "thermal") return UnitKind::Thermal;
  if (s == "wind") return UnitKind::Wind;
  throw ConfigError(path, "unknown kind '" + s + "' (expected thermal or wind)");
}

inline FuelClass parse_class(const json& v, const std::string& path) {
  const std::string s = as_string(v, path);
  if (auto fc = parse_fuel_class(s)) return *fc;
  throw ConfigError(path, "unknown fuel class '" + s + "'");
}

inline json stage_ints_to_json(std::span<const int> values) {
  bool uniform = true;
  for (int x : values) uniform = uniform && x == values.front();
  if (uniform && !values.empty()) return values.front();
  return json(std::vector<int>(values.begin(), values.end()));
}

}  // namespace detail

/// Builds and validates a Problem from a parsed config document.
inline Problem problem_from_json(const nlohmann::json& doc) {
  using detail::as_int;
  using detail::as_number;
  using detail::require;
  using nlohmann::json;

  detail::allow_keys(doc, "$", {"units", "horizon", "economics", "constraints", "reliability", "ga", "wind",
                                "forced_builds", "description"});
  Problem p;

  // horizon
  {
    const std::string path = "$.horizon";
    const json& h = require(doc, "$", "horizon");
    detail::allow_keys(h, path, {"stage_count", "years_per_stage", "lead_time_years", "hours_per_year", "peak_load_mw",
                                 "base_load_ratio", "ldc_breakpoint"});
    auto& H = p.horizon;
    H.stage_count = as_int(require(h, path, "stage_count"), path + ".stage_count");
    H.years_per_stage = as_int(require(h, path, "years_per_stage"), path + ".years_per_stage");
    H.lead_time_years = detail::number_or(h, path, "lead_time_years", 0.0);
    H.hours_per_year = detail::number_or(h, path, "hours_per_year", 8760.0);
    H.peak_load_mw = detail::number_list(require(h, path, "peak_load_mw"), path + ".peak_load_mw");
    H.base_load_ratio = detail::number_or(h, path, "base_load_ratio", 0.5);
    if (h.contains("ldc_breakpoint")) {
      const std::string bp = path + ".ldc_breakpoint";
      const json& b = h["ldc_breakpoint"];
      detail::allow_keys(b, bp, {"duration_fraction", "load_fraction"});
      H.ldc_breakpoint = LdcBreakpoint{as_number(require(b, bp, "duration_fraction"), bp + ".duration_fraction"),
                                       as_number(require(b, bp, "load_fraction"), bp + ".load_fraction")};
    }
    if (H.stage_count < 1) throw ConfigError(path + ".stage_count", "must be >= 1");
    if (static_cast<int>(H.peak_load_mw.size()) != H.stage_count)
      throw ConfigError(path + ".peak_load_mw", "expected stage_count entries");
  }
  const int T = p.horizon.stage_count;

  // wind models
  if (doc.contains("wind")) {
    const json& w = doc["wind"];
    detail::allow_keys(w, "$.wind", {"farm_models"});
    if (w.contains("farm_models")) {
      const json& fm = w["farm_models"];
      if (!fm.is_object()) throw ConfigError("$.wind.farm_models", "expected an object");
      for (const auto& [name, entry] : fm.items())
        p.wind_models.emplace(name, detail::parse_wind_model(entry, "$.wind.farm_models." + name));
    }
  }

  // units
  const json& units = require(doc, "$", "units");
  if (!units.is_array() || units.empty()) throw ConfigError("$.units", "expected a non-empty array");
  std::vector<std::vector<int>> umax, umin;
  for (std::size_t k = 0; k < units.size(); ++k) {
    const std::string path = "$.units[" + std::to_string(k) + "]";
    const json& j = units[k];
    detail::allow_keys(j, path, {"id", "kind", "fuel_class", "unit_capacity_mw", "for_rate", "invest_cost_per_kw",
                                 "fixed_om_per_mw_year", "variable_om_per_kwh", "salvage_factor",
                                 "salvage_factor_by_stage", "candidate", "existing_units", "u_max", "u_min",
                                 "farm_model"});
    UnitType u;
    u.id = detail::as_string(require(j, path, "id"), path + ".id");
    u.kind = detail::parse_kind(require(j, path, "kind"), path + ".kind");
    u.fuel_class = detail::parse_class(require(j, path, "fuel_class"), path + ".fuel_class");
    u.unit_capacity_mw = as_number(require(j, path, "unit_capacity_mw"), path + ".unit_capacity_mw");
    u.for_rate = detail::number_or(j, path, "for_rate", 0.0);
    u.invest_cost_per_kw = as_number(require(j, path, "invest_cost_per_kw"), path + ".invest_cost_per_kw");
    u.fixed_om_per_mw_year = as_number(require(j, path, "fixed_om_per_mw_year"), path + ".fixed_om_per_mw_year");
    u.variable_om_per_kwh = as_number(require(j, path, "variable_om_per_kwh"), path + ".variable_om_per_kwh");
    u.salvage_factor = detail::number_or(j, path, "salvage_factor", 0.0);
    if (j.contains("salvage_factor_by_stage"))
      u.salvage_factor_by_stage = detail::number_list(j["salvage_factor_by_stage"], path + ".salvage_factor_by_stage");
    u.candidate = j.contains("candidate") ? detail::as_bool(j["candidate"], path + ".candidate") : false;
    u.existing_units = detail::int_or(j, path, "existing_units", 0);

    if (j.contains("farm_model")) {
      u.farm_model_name = detail::as_string(j["farm_model"], path + ".farm_model");
      const auto it = p.wind_models.find(u.farm_model_name);
      if (it == p.wind_models.end())
        throw ConfigError(path + ".farm_model", "no wind.farm_models entry named '" + u.farm_model_name + "'");
      u.farm_model = it->second.farm;
    } else if (u.kind == UnitKind::Wind) {
      throw ConfigError(path + ".farm_model", "wind unit requires a farm model");
    }

    if (j.contains("u_max")) {
      umax.push_back(detail::stage_ints(j["u_max"], path + ".u_max", T));
    } else if (u.candidate) {
      throw ConfigError(path + ".u_max", "candidate units must declare u_max");
    } else {
      umax.emplace_back(static_cast<std::size_t>(T), 0);
    }
    umin.push_back(j.contains("u_min") ? detail::stage_ints(j["u_min"], path + ".u_min", T)
                                       : std::vector<int>(static_cast<std::size_t>(T), 0));
    try {
      validate(u);
    } catch (const InvariantError& e) {
      throw ConfigError(path, e.what());
    }
    p.units.push_back(std::move(u));
  }
  const int N = p.type_count();

  // economics
  {
    const std::string path = "$.economics";
    const json& e = require(doc, "$", "economics");
    detail::allow_keys(e, path, {"discount_rate", "ceens_per_kwh"});
    p.economics.discount_rate = as_number(require(e, path, "discount_rate"), path + ".discount_rate");
    p.economics.ceens_per_kwh = detail::number_or(e, path, "ceens_per_kwh", 0.0);
  }

  // constraints
  {
    const std::string path = "$.constraints";
    const json& c = require(doc, "$", "constraints");
    detail::allow_keys(c, path, {"reserve_min", "reserve_max", "lolp_max", "fuel_mix"});
    auto& C = p.constraints;
    C.reserve_min = as_number(require(c, path, "reserve_min"), path + ".reserve_min");
    C.reserve_max = as_number(require(c, path, "reserve_max"), path + ".reserve_max");
    C.lolp_max = as_number(require(c, path, "lolp_max"), path + ".lolp_max");
    if (c.contains("fuel_mix")) {
      const json& fm = c["fuel_mix"];
      if (!fm.is_object()) throw ConfigError(path + ".fuel_mix", "expected an object");
      for (const auto& [name, band] : fm.items()) {
        const std::string bp = path + ".fuel_mix." + name;
        const auto fc = parse_fuel_class(name);
        if (!fc) throw ConfigError(bp, "unknown fuel class");
        detail::allow_keys(band, bp, {"min", "max"});
        C.fuel_mix[*fc] = FuelBand{detail::number_or(band, bp, "min", 0.0), detail::number_or(band, bp, "max", 1.0)};
      }
    }
    C.u_max = StageMatrix<int>(T, N, 0);
    C.u_min = StageMatrix<int>(T, N, 0);
    for (int i = 0; i < N; ++i)
      for (int t = 0; t < T; ++t) {
        C.u_max(t, i) = umax[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
        C.u_min(t, i) = umin[static_cast<std::size_t>(i)][static_cast<std::size_t>(t)];
      }
  }

  // reliability
  if (doc.contains("reliability")) {
    const std::string path = "$.reliability";
    const json& r = doc["reliability"];
    detail::allow_keys(r, path, {"capacity_step_mw", "prune_threshold"});
    p.reliability.capacity_step_mw = detail::number_or(r, path, "capacity_step_mw", p.reliability.capacity_step_mw);
    p.reliability.prune_threshold = detail::number_or(r, path, "prune_threshold", p.reliability.prune_threshold);
  }

  // ga
  if (doc.contains("ga")) {
    const std::string path = "$.ga";
    const json& g = doc["ga"];
    detail::allow_keys(g, path, {"population_size", "generations", "crossover_fraction", "crossover_type_probs",
                                 "mutants_per_generation", "elite_count", "penalty_weights", "rng_seed", "runs",
                                 "repair_attempts"});
    auto& G = p.ga;
    G.population_size = detail::int_or(g, path, "population_size", G.population_size);
    G.generations = detail::int_or(g, path, "generations", G.generations);
    G.crossover_fraction = detail::number_or(g, path, "crossover_fraction", G.crossover_fraction);
    G.mutants_per_generation = detail::int_or(g, path, "mutants_per_generation", G.mutants_per_generation);
    G.elite_count = detail::int_or(g, path, "elite_count", G.elite_count);
    G.runs = detail::int_or(g, path, "runs", G.runs);
    G.repair_attempts = detail::int_or(g, path, "repair_attempts", G.repair_attempts);
    if (g.contains("rng_seed")) G.rng_seed = detail::as_u64(g["rng_seed"], path + ".rng_seed");
    if (g.contains("crossover_type_probs")) {
      const std::string cp = path + ".crossover_type_probs";
      const json& c = g["crossover_type_probs"];
      detail::allow_keys(c, cp, {"one_point", "two_point", "substring"});
      G.crossover_type_probs = {as_number(require(c, cp, "one_point"), cp + ".one_point"),
                                as_number(require(c, cp, "two_point"), cp + ".two_point"),
                                as_number(require(c, cp, "substring"), cp + ".substring")};
    }
    if (g.contains("penalty_weights")) {
      const std::string wp = path + ".penalty_weights";
      const json& w = g["penalty_weights"];
      detail::allow_keys(w, wp, {"build_limit", "fuel_mix", "reserve", "lolp"});
      auto opt = [&](const char* key, std::optional<double>& slot) {
        if (w.contains(key)) slot = as_number(w[key], wp + "." + key);
      };
      opt("build_limit", G.penalty_weights.build_limit);
      opt("fuel_mix", G.penalty_weights.fuel_mix);
      opt("reserve", G.penalty_weights.reserve);
      opt("lolp", G.penalty_weights.lolp);
    }
  }

  // forced builds: {unit_id: count | [per-stage counts]}
  p.forced_builds = p.zero_plan();
  if (doc.contains("forced_builds")) {
    const json& fb = doc["forced_builds"];
    if (!fb.is_object()) throw ConfigError("$.forced_builds", "expected an object");
    for (const auto& [id, v] : fb.items()) {
      const std::string path = "$.forced_builds." + id;
      const auto i = p.index_of(id);
      if (!i) throw ConfigError(path, "unknown unit id");
      const auto counts = detail::stage_ints(v, path, T);
      for (int t = 0; t < T; ++t) p.forced_builds(t, *i) = counts[static_cast<std::size_t>(t)];
    }
  }

  try {
    validate(p);
  } catch (const InvariantError& e) {
    throw ConfigError("$", e.what());
  }
  return p;
}

inline Problem problem_from_string(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("$", std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(doc);
}

/// Thrown when a file cannot be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Problem load_problem(const std::string& path) { return problem_from_string(read_text_file(path)); }

/// Inverse of problem_from_json: loading the result yields an equal Problem.
inline nlohmann::json problem_to_json(const Problem& p) {
  using nlohmann::json;
  json doc;
  const int T = p.stage_count();

  json h;
  h["stage_count"] = p.horizon.stage_count;
  h["years_per_stage"] = p.horizon.years_per_stage;
  h["lead_time_years"] = p.horizon.lead_time_years;
  h["hours_per_year"] = p.horizon.hours_per_year;
  h["peak_load_mw"] = p.horizon.peak_load_mw;
  h["base_load_ratio"] = p.horizon.base_load_ratio;
  if (p.horizon.ldc_breakpoint)
    h["ldc_breakpoint"] = {{"duration_fraction", p.horizon.ldc_breakpoint->duration_fraction},
                           {"load_fraction", p.horizon.ldc_breakpoint->load_fraction}};
  doc["horizon"] = h;

  json units = json::array();
  for (int i = 0; i < p.type_count(); ++i) {
    const UnitType& u = p.unit(i);
    json j;
    j["id"] = u.id;
    j["kind"] = std::string(to_string(u.kind));
    j["fuel_class"] = std::string(to_string(u.fuel_class));
    j["unit_capacity_mw"] = u.unit_capacity_mw;
    j["for_rate"] = u.for_rate;
    j["invest_cost_per_kw"] = u.invest_cost_per_kw;
    j["fixed_om_per_mw_year"] = u.fixed_om_per_mw_year;
    j["variable_om_per_kwh"] = u.variable_om_per_kwh;
    j["salvage_factor"] = u.salvage_factor;
    if (!u.salvage_factor_by_stage.empty()) j["salvage_factor_by_stage"] = u.salvage_factor_by_stage;
    j["candidate"] = u.candidate;
    j["existing_units"] = u.existing_units;
    std::vector<int> umax, umin;
    bool any_min = false;
    for (int t = 0; t < T; ++t) {
      umax.push_back(p.constraints.u_max(t, i));
      umin.push_back(p.constraints.u_min(t, i));
      any_min = any_min || umin.back() != 0;
    }
    j["u_max"] = detail::stage_ints_to_json(umax);
    if (any_min) j["u_min"] = detail::stage_ints_to_json(umin);
    if (!u.farm_model_name.empty()) j["farm_model"] = u.farm_model_name;
    units.push_back(j);
  }
  doc["units"] = units;

  doc["economics"] = {{"discount_rate", p.economics.discount_rate}, {"ceens_per_kwh", p.economics.ceens_per_kwh}};

  json c;
  c["reserve_min"] = p.constraints.reserve_min;
  c["reserve_max"] = p.constraints.reserve_max;
  c["lolp_max"] = p.constraints.lolp_max;
  json fm = json::object();
  for (const auto& [fc, band] : p.constraints.fuel_mix)
    fm[std::string(to_string(fc))] = {{"min", band.min}, {"max", band.max}};
  c["fuel_mix"] = fm;
  doc["constraints"] = c;

  doc["reliability"] = {{"capacity_step_mw", p.reliability.capacity_step_mw},
                        {"prune_threshold", p.reliability.prune_threshold}};

  const GAConfig& g = p.ga;
  json ga;
  ga["population_size"] = g.population_size;
  ga["generations"] = g.generations;
  ga["crossover_fraction"] = g.crossover_fraction;
  ga["crossover_type_probs"] = {{"one_point", g.crossover_type_probs.one_point},
                                {"two_point", g.crossover_type_probs.two_point},
                                {"substring", g.crossover_type_probs.substring}};
  ga["mutants_per_generation"] = g.mutants_per_generation;
  ga["elite_count"] = g.elite_count;
  json pw = json::object();
  if (g.penalty_weights.build_limit) pw["build_limit"] = *g.penalty_weights.build_limit;
  if (g.penalty_weights.fuel_mix) pw["fuel_mix"] = *g.penalty_weights.fuel_mix;
  if (g.penalty_weights.reserve) pw["reserve"] = *g.penalty_weights.reserve;
  if (g.penalty_weights.lolp) pw["lolp"] = *g.penalty_weights.lolp;
  ga["penalty_weights"] = pw;
  ga["rng_seed"] = g.rng_seed;
  ga["runs"] = g.runs;
  ga["repair_attempts"] = g.repair_attempts;
  doc["ga"] = ga;

  json models = json::object();
  for (const auto& [name, e] : p.wind_models) models[name] = detail::wind_model_to_json(e);
  doc["wind"] = {{"farm_models", models}};

  json fb = json::object();
  for (int i = 0; i < p.type_count(); ++i) {
    std::vector<int> counts;
    bool any = false;
    for (int t = 0; t < T; ++t) {
      counts.push_back(p.forced_builds(t, i));
      any = any || counts.back() != 0;
    }
    if (any) fb[p.unit(i).id] = detail::stage_ints_to_json(counts);
  }
  if (!fb.empty()) doc["forced_builds"] = fb;
  return doc;
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

/// Hash of the canonical serialization of a problem.
inline std::uint64_t config_hash(const Problem& p) { return fnv1a64(problem_to_json(p).dump()); }

}  // namespace gep
