#pragma once

// Discounted objective. All currency values are in millions (M) of the
// config's currency unit; energies are MWh per year.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gep/adequacy.hpp"
#include "gep/planning_model.hpp"

namespace gep {

struct CostBreakdown {
  double investment = 0.0;
  double salvage = 0.0;
  double fixed_om = 0.0;
  double variable_om = 0.0;
  double eens_cost = 0.0;
  double total = 0.0;

  std::vector<double> stage_investment;
  std::vector<double> stage_salvage;
  std::vector<double> stage_fixed_om;
  std::vector<double> stage_variable_om;
  std::vector<double> stage_eens_cost;
  std::vector<double> stage_eens_mwh;

  double operational() const { return fixed_om + variable_om + eens_cost; }

  bool operator==(const CostBreakdown&) const = default;
};

inline double discount_to_base(double amount, double years_from_base, double discount_rate) {
  return amount * std::pow(1.0 + discount_rate, -years_from_base);
}

/// Mid-year discount factors summed over the years of stage t.
inline double stage_annuity_factor(const Problem& p, int t) {
  const double start = p.horizon.stage_start_years(t);
  double f = 0.0;
  for (int y = 0; y < p.horizon.years_per_stage; ++y)
    f += std::pow(1.0 + p.economics.discount_rate, -(start + 0.5 + y));
  return f;
}

/// Present value of the capacity built at the start of stage t (forced builds included).
inline double investment_cost(const Problem& p, const ExpansionPlan& plan, int t) {
  check_plan_shape(p, plan);
  double sum = 0.0;
  for (int i = 0; i < p.type_count(); ++i) {
    const UnitType& u = p.unit(i);
    const int built = plan(t, i) + p.forced_builds(t, i);
    sum += u.invest_m_per_mw() * built * u.unit_capacity_mw;
  }
  return discount_to_base(sum, p.horizon.stage_start_years(t), p.economics.discount_rate);
}

/// Salvage credit of the stage-t builds, discounted from the end of the horizon.
inline double salvage_value(const Problem& p, const ExpansionPlan& plan, int t) {
  check_plan_shape(p, plan);
  double sum = 0.0;
  for (int i = 0; i < p.type_count(); ++i) {
    const UnitType& u = p.unit(i);
    const int built = plan(t, i) + p.forced_builds(t, i);
    sum += u.salvage_at(t) * u.invest_m_per_mw() * built * u.unit_capacity_mw;
  }
  return discount_to_base(sum, p.horizon.end_years(), p.economics.discount_rate);
}

inline double salvage_value(const Problem& p, const ExpansionPlan& plan) {
  double s = 0.0;
  for (int t = 0; t < p.stage_count(); ++t) s += salvage_value(p, plan, t);
  return s;
}

/// Merit-order dispatch under the LDC: types are stacked from zero load in
/// ascending variable cost (ties by catalog order); each earns the LDC
/// energy of its load band. Wind is credited at its expected output.
inline std::vector<double> dispatch_energy(const Problem& p, std::span<const double> installed_mw,
                                           const LoadDurationCurve& ldc) {
  const int N = p.type_count();
  if (static_cast<int>(installed_mw.size()) != N) throw std::invalid_argument("dispatch_energy: state has wrong width");
  std::vector<int> order(static_cast<std::size_t>(N));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&p](int a, int b) {
    return p.unit(a).variable_om_per_kwh < p.unit(b).variable_om_per_kwh;
  });

  std::vector<double> energy(static_cast<std::size_t>(N), 0.0);
  double level = 0.0;
  for (int i : order) {
    const double credited = installed_mw[static_cast<std::size_t>(i)] * p.unit(i).dispatch_credit_ratio();
    if (credited <= 0.0) continue;
    energy[static_cast<std::size_t>(i)] = ldc.energy_between(level, level + credited);
    level += credited;
  }
  return energy;
}

struct OmCost {
  double fixed = 0.0;
  double variable = 0.0;
};

inline OmCost om_cost(const Problem& p, std::span<const double> installed_mw, std::span<const double> energy_mwh,
                      int t) {
  double fixed = 0.0, variable = 0.0;
  for (int i = 0; i < p.type_count(); ++i) {
    const UnitType& u = p.unit(i);
    fixed += installed_mw[static_cast<std::size_t>(i)] * u.fixed_om_m_per_mw_year();
    variable += energy_mwh[static_cast<std::size_t>(i)] * u.variable_om_m_per_mwh();
  }
  const double f = stage_annuity_factor(p, t);
  return {fixed * f, variable * f};
}

inline double eens_cost(const Problem& p, double eens_mwh, int t) {
  if (eens_mwh < 0.0) throw std::invalid_argument("eens_cost: negative energy");
  return stage_annuity_factor(p, t) * eens_mwh * p.economics.ceens_m_per_mwh();
}

/// Full objective given the stage adequacy results of the same plan.
inline CostBreakdown total_objective(const Problem& p, const ExpansionPlan& plan,
                                     std::span<const StageAdequacy> adequacy) {
  check_plan_shape(p, plan);
  const int T = p.stage_count();
  if (static_cast<int>(adequacy.size()) != T) throw std::invalid_argument("total_objective: adequacy has wrong length");
  const CumulativeState x = cumulative_state(p, plan);

  CostBreakdown c;
  for (int t = 0; t < T; ++t) {
    const auto row = x.row(t);
    const auto energy = dispatch_energy(p, row, p.horizon.ldc(t));
    const OmCost om = om_cost(p, row, energy, t);
    const double e = adequacy[static_cast<std::size_t>(t)].eens_mwh;
    c.stage_investment.push_back(investment_cost(p, plan, t));
    c.stage_salvage.push_back(salvage_value(p, plan, t));
    c.stage_fixed_om.push_back(om.fixed);
    c.stage_variable_om.push_back(om.variable);
    c.stage_eens_mwh.push_back(e);
    c.stage_eens_cost.push_back(eens_cost(p, e, t));
  }
  auto sum = [](const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); };
  c.investment = sum(c.stage_investment);
  c.salvage = sum(c.stage_salvage);
  c.fixed_om = sum(c.stage_fixed_om);
  c.variable_om = sum(c.stage_variable_om);
  c.eens_cost = sum(c.stage_eens_cost);
  c.total = c.investment + c.fixed_om + c.variable_om + c.eens_cost - c.salvage;
  return c;
}

inline CostBreakdown total_objective(const Problem& p, const ExpansionPlan& plan) {
  const AdequacyModel model(p);
  const auto adequacy = model.evaluate(plan);
  return total_objective(p, plan, adequacy);
}

}  // namespace gep
