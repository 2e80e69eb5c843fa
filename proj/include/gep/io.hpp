#pragma once

// CSV readers and writers. Every written file starts with a provenance
// header "# seed=<u64> config_hash=<hex>"; doubles use %.17g so values
// survive a text round trip exactly.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gep/config.hpp"
#include "gep/constraints.hpp"
#include "gep/cost_model.hpp"
#include "gep/ga_engine.hpp"
#include "gep/planning_model.hpp"
#include "gep/reliability.hpp"
#include "gep/wind_model.hpp"

namespace gep {

struct Provenance {
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
};

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string header_line(const Provenance& prov) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "# seed=%llu config_hash=%016llx\n", static_cast<unsigned long long>(prov.seed),
                static_cast<unsigned long long>(prov.config_hash));
  return buf;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    out.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return out;
}

inline bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

/// Non-comment, non-blank lines of a CSV file, split into cells.
inline std::vector<std::vector<std::string>> read_csv_rows(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(split_csv_line(line));
  }
  return rows;
}

/// Numeric rows, skipping a leading non-numeric header row.
inline std::vector<std::vector<double>> read_numeric_rows(const std::string& path) {
  const auto rows = read_csv_rows(path);
  std::vector<std::vector<double>> out;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::vector<double> values;
    bool ok = true;
    for (const auto& cell : rows[r]) {
      double x = 0.0;
      if (!parse_double(cell, x)) {
        ok = false;
        break;
      }
      values.push_back(x);
    }
    if (!ok) {
      if (r == 0 && out.empty()) continue;
      throw IoError(path + ": non-numeric value in row " + std::to_string(r + 1));
    }
    out.push_back(std::move(values));
  }
  return out;
}

}  // namespace detail

/// Wind speeds in m/s from the last column of each row.
inline WindSeries read_wind_series(const std::string& path, double sample_interval_h = 1.0) {
  WindSeries s;
  s.sample_interval_h = sample_interval_h;
  for (const auto& row : detail::read_numeric_rows(path)) {
    if (row.empty()) continue;
    s.samples.push_back(row.back());
  }
  if (s.samples.empty()) throw IoError(path + ": no wind speed samples");
  return s;
}

/// Two columns: power_mw, probability.
inline std::vector<OutputLevel> read_levels(const std::string& path) {
  std::vector<OutputLevel> levels;
  for (const auto& row : detail::read_numeric_rows(path)) {
    if (row.size() != 2) throw IoError(path + ": expected 2 columns (power_mw,probability)");
    levels.push_back({row[0], row[1]});
  }
  if (levels.empty()) throw IoError(path + ": no levels");
  return levels;
}

inline std::string levels_csv(std::span<const OutputLevel> levels, const Provenance& prov) {
  std::string s = header_line(prov) + "power_mw,probability\n";
  for (const auto& l : levels) s += format_double(l.power_mw) + "," + format_double(l.probability) + "\n";
  return s;
}

/// Stage rows (1-based) by unit-id columns.
inline std::string plan_csv(const Problem& p, const ExpansionPlan& plan, const Provenance& prov) {
  std::string s = header_line(prov) + "stage";
  for (const auto& u : p.units) s += "," + u.id;
  s += "\n";
  for (int t = 0; t < plan.stages(); ++t) {
    s += std::to_string(t + 1);
    for (int i = 0; i < plan.types(); ++i) s += "," + std::to_string(plan(t, i));
    s += "\n";
  }
  return s;
}

/// Reads a plan written by plan_csv. Columns are matched by unit id; types
/// without a column are zero. Unknown ids are an error.
inline ExpansionPlan read_plan(const Problem& p, const std::string& path) {
  const auto rows = detail::read_csv_rows(path);
  if (rows.empty() || rows[0].empty() || rows[0][0] != "stage") throw IoError(path + ": expected a 'stage,...' header");
  std::vector<int> column_type;
  for (std::size_t c = 1; c < rows[0].size(); ++c) {
    const auto i = p.index_of(rows[0][c]);
    if (!i) throw IoError(path + ": unknown unit id '" + rows[0][c] + "'");
    column_type.push_back(*i);
  }
  if (static_cast<int>(rows.size()) - 1 != p.stage_count())
    throw IoError(path + ": expected " + std::to_string(p.stage_count()) + " stage rows, got " +
                  std::to_string(rows.size() - 1));
  ExpansionPlan plan = p.zero_plan();
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != rows[0].size()) throw IoError(path + ": ragged row " + std::to_string(r));
    for (std::size_t c = 1; c < rows[r].size(); ++c) {
      double x = 0.0;
      if (!detail::parse_double(rows[r][c], x) || x != static_cast<double>(static_cast<int>(x)))
        throw IoError(path + ": non-integer build count in row " + std::to_string(r));
      plan(static_cast<int>(r) - 1, column_type[c - 1]) = static_cast<int>(x);
    }
  }
  return plan;
}

inline std::string history_csv(std::span<const GenerationStats> history, const Provenance& prov) {
  std::string s = header_line(prov) + "generation,best_fitness,mean_fitness\n";
  for (std::size_t g = 0; g < history.size(); ++g)
    s += std::to_string(g) + "," + format_double(history[g].best) + "," + format_double(history[g].mean) + "\n";
  return s;
}

inline std::string copt_csv(const OutageTable& table, const Provenance& prov) {
  std::string s = header_line(prov) + "available_mw,probability\n";
  table.for_each([&s](double mw, double prob) { s += format_double(mw) + "," + format_double(prob) + "\n"; });
  return s;
}

/// Per-stage components plus a "total" row.
inline std::string breakdown_csv(const CostBreakdown& c, std::span<const StageAdequacy> adequacy,
                                 const Provenance& prov) {
  std::string s = header_line(prov) + "stage,investment,salvage,fixed_om,variable_om,eens_cost,eens_mwh,lolp\n";
  for (std::size_t t = 0; t < c.stage_investment.size(); ++t) {
    s += std::to_string(t + 1) + "," + format_double(c.stage_investment[t]) + "," + format_double(c.stage_salvage[t]) +
         "," + format_double(c.stage_fixed_om[t]) + "," + format_double(c.stage_variable_om[t]) + "," +
         format_double(c.stage_eens_cost[t]) + "," + format_double(c.stage_eens_mwh[t]) + "," +
         format_double(adequacy[t].lolp) + "\n";
  }
  double eens_total = 0.0;
  for (double e : c.stage_eens_mwh) eens_total += e;
  s += "total," + format_double(c.investment) + "," + format_double(c.salvage) + "," + format_double(c.fixed_om) + "," +
       format_double(c.variable_om) + "," + format_double(c.eens_cost) + "," + format_double(eens_total) + ",\n";
  return s;
}

inline nlohmann::json breakdown_json(const CostBreakdown& c) {
  return {{"currency_unit", "million"},
          {"total", c.total},
          {"operational", c.operational()},
          {"investment", c.investment},
          {"salvage", c.salvage},
          {"fixed_om", c.fixed_om},
          {"variable_om", c.variable_om},
          {"eens_cost", c.eens_cost},
          {"stage_investment", c.stage_investment},
          {"stage_salvage", c.stage_salvage},
          {"stage_fixed_om", c.stage_fixed_om},
          {"stage_variable_om", c.stage_variable_om},
          {"stage_eens_cost", c.stage_eens_cost},
          {"stage_eens_mwh", c.stage_eens_mwh}};
}

inline nlohmann::json feasibility_json(const FeasibilityReport& r) {
  nlohmann::json records = nlohmann::json::array();
  for (const auto& x : r.records)
    records.push_back({{"kind", std::string(to_string(x.kind))},
                       {"stage", x.stage + 1},
                       {"subject", x.subject},
                       {"measured", x.measured},
                       {"lower", x.lower},
                       {"upper", x.upper},
                       {"violation", x.violation},
                       {"normalized", x.normalized}});
  nlohmann::json out = {{"feasible", r.feasible()},
                        {"violation_count", r.violation_count()},
                        {"lolp_by_stage", r.lolp_by_stage()},
                        {"records", records}};
  if (const auto* v = r.first_violation())
    out["first_violation"] = {{"kind", std::string(to_string(v->kind))}, {"stage", v->stage + 1}, {"subject", v->subject}};
  return out;
}

/// JSON text with a provenance header, for files that must carry one.
inline std::string json_with_header(nlohmann::json doc, const Provenance& prov) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(prov.config_hash));
  doc["_provenance"] = {{"seed", prov.seed}, {"config_hash", buf}};
  return doc.dump(2) + "\n";
}

}  // namespace gep
