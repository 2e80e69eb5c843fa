#pragma once

// Build-limit, fuel-mix, reserve-margin and LOLP checks.

#include <algorithm>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gep/adequacy.hpp"
#include "gep/planning_model.hpp"

namespace gep {

enum class ConstraintKind { BuildLimit, FuelMix, Reserve, Lolp };

inline constexpr std::string_view to_string(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::BuildLimit: return "build_limit";
    case ConstraintKind::FuelMix: return "fuel_mix";
    case ConstraintKind::Reserve: return "reserve";
    case ConstraintKind::Lolp: return "lolp";
  }
  return "?";
}

/// One evaluated constraint instance. `violation` is in the natural unit of
/// the check (units, share, MW, probability); `normalized` divides it by the
/// check's scale (1, 1, stage peak, LOLP bound) for penalty weighting.
struct ConstraintRecord {
  ConstraintKind kind = ConstraintKind::BuildLimit;
  int stage = 0;
  std::string subject;
  double measured = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double violation = 0.0;
  double normalized = 0.0;

  bool operator==(const ConstraintRecord&) const = default;
};

struct FeasibilityReport {
  std::vector<ConstraintRecord> records;

  bool feasible() const {
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.violation == 0.0; });
  }

  int violation_count() const {
    return static_cast<int>(std::count_if(records.begin(), records.end(), [](const auto& r) { return r.violation > 0.0; }));
  }

  double normalized_total(ConstraintKind kind) const {
    double s = 0.0;
    for (const auto& r : records)
      if (r.kind == kind) s += r.normalized;
    return s;
  }

  double violation_total(ConstraintKind kind) const {
    double s = 0.0;
    for (const auto& r : records)
      if (r.kind == kind) s += r.violation;
    return s;
  }

  std::vector<double> lolp_by_stage() const {
    std::vector<double> out;
    for (const auto& r : records)
      if (r.kind == ConstraintKind::Lolp) out.push_back(r.measured);
    return out;
  }

  /// First violated record in stage order, if any.
  const ConstraintRecord* first_violation() const {
    const ConstraintRecord* best = nullptr;
    for (const auto& r : records)
      if (r.violation > 0.0 && (!best || r.stage < best->stage)) best = &r;
    return best;
  }

  bool operator==(const FeasibilityReport&) const = default;
};

inline double band_violation(double value, double lo, double hi) {
  if (value < lo) return lo - value;
  if (value > hi) return value - hi;
  return 0.0;
}

inline std::vector<ConstraintRecord> check_build_limits(const Problem& p, const ExpansionPlan& plan) {
  check_plan_shape(p, plan);
  const auto& c = p.constraints;
  std::vector<ConstraintRecord> out;
  for (int t = 0; t < plan.stages(); ++t)
    for (int i = 0; i < plan.types(); ++i) {
      const int u = plan(t, i);
      if (c.u_max(t, i) == 0 && c.u_min(t, i) == 0 && u == 0) continue;
      const double v = band_violation(u, c.u_min(t, i), c.u_max(t, i));
      out.push_back({ConstraintKind::BuildLimit, t, p.unit(i).id, static_cast<double>(u),
                     static_cast<double>(c.u_min(t, i)), static_cast<double>(c.u_max(t, i)), v, v});
    }
  return out;
}

/// Capacity share of every bounded fuel class in one stage.
inline std::vector<ConstraintRecord> check_fuel_mix(const Problem& p, std::span<const double> installed_mw, int stage) {
  double total = 0.0;
  std::map<FuelClass, double> by_class;
  for (int i = 0; i < p.type_count(); ++i) {
    total += installed_mw[static_cast<std::size_t>(i)];
    by_class[p.unit(i).fuel_class] += installed_mw[static_cast<std::size_t>(i)];
  }
  if (!(total > 0.0)) throw std::invalid_argument("check_fuel_mix: zero installed capacity");

  std::vector<ConstraintRecord> out;
  for (const auto& [fc, band] : p.constraints.fuel_mix) {
    const double share = by_class[fc] / total;
    const double v = band_violation(share, band.min, band.max);
    out.push_back({ConstraintKind::FuelMix, stage, std::string(to_string(fc)), share, band.min, band.max, v, v});
  }
  return out;
}

/// Installed nameplate (wind included) against [(1+r_min) D, (1+r_max) D].
inline ConstraintRecord check_reserve(const Problem& p, std::span<const double> installed_mw, double peak_mw, int stage) {
  if (!(peak_mw > 0.0)) throw std::invalid_argument("check_reserve: peak must be positive");
  double total = 0.0;
  for (double x : installed_mw) total += x;
  const double lo = (1.0 + p.constraints.reserve_min) * peak_mw;
  const double hi = (1.0 + p.constraints.reserve_max) * peak_mw;
  const double v = band_violation(total, lo, hi);
  return {ConstraintKind::Reserve, stage, "installed_mw", total, lo, hi, v, v / peak_mw};
}

inline double reserve_margin(double installed_mw, double peak_mw) { return (installed_mw - peak_mw) / peak_mw; }

inline ConstraintRecord check_lolp(const Problem& p, double lolp_value, int stage) {
  const double eps = p.constraints.lolp_max;
  const double v = std::max(0.0, lolp_value - eps);
  return {ConstraintKind::Lolp, stage, "lolp", lolp_value, 0.0, eps, v, v / eps};
}

inline ConstraintRecord check_lolp(const Problem& p, const OutageTable& table, const LoadDurationCurve& ldc, int stage) {
  return check_lolp(p, lolp(table, ldc), stage);
}

inline FeasibilityReport evaluate_feasibility(const Problem& p, const ExpansionPlan& plan,
                                              std::span<const StageAdequacy> adequacy) {
  FeasibilityReport report;
  report.records = check_build_limits(p, plan);
  const CumulativeState x = cumulative_state(p, plan);
  for (int t = 0; t < p.stage_count(); ++t) {
    const auto row = x.row(t);
    for (auto& r : check_fuel_mix(p, row, t)) report.records.push_back(std::move(r));
    report.records.push_back(check_reserve(p, row, p.horizon.peak_load_mw[static_cast<std::size_t>(t)], t));
    report.records.push_back(check_lolp(p, adequacy[static_cast<std::size_t>(t)].lolp, t));
  }
  return report;
}

inline FeasibilityReport evaluate_feasibility(const Problem& p, const ExpansionPlan& plan) {
  const AdequacyModel model(p);
  const auto adequacy = model.evaluate(plan);
  return evaluate_feasibility(p, plan, adequacy);
}

}  // namespace gep
