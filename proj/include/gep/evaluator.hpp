#pragma once

// Objective + feasibility + penalized fitness of a plan.

#include <algorithm>
#include <memory>

#include "gep/adequacy.hpp"
#include "gep/constraints.hpp"
#include "gep/cost_model.hpp"

namespace gep {

struct ResolvedPenalties {
  double build_limit = 0.0;
  double fuel_mix = 0.0;
  double reserve = 0.0;
  double lolp = 0.0;

  double weight(ConstraintKind k) const {
    switch (k) {
      case ConstraintKind::BuildLimit: return build_limit;
      case ConstraintKind::FuelMix: return fuel_mix;
      case ConstraintKind::Reserve: return reserve;
      case ConstraintKind::Lolp: return lolp;
    }
    return 0.0;
  }
};

/// 10x the largest undiscounted single-stage investment with every gene at u_max.
inline double default_penalty_weight(const Problem& p) {
  double largest = 0.0;
  for (int t = 0; t < p.stage_count(); ++t) {
    double stage = 0.0;
    for (int i = 0; i < p.type_count(); ++i)
      stage += p.unit(i).invest_m_per_mw() * p.unit(i).unit_capacity_mw * (p.constraints.u_max(t, i) + p.forced_builds(t, i));
    largest = std::max(largest, stage);
  }
  return largest > 0.0 ? 10.0 * largest : 1.0;
}

inline ResolvedPenalties resolve_penalties(const Problem& p, const PenaltyWeights& w) {
  const double def = default_penalty_weight(p);
  return {w.build_limit.value_or(def), w.fuel_mix.value_or(def), w.reserve.value_or(def), w.lolp.value_or(def)};
}

inline double penalty(const FeasibilityReport& report, const ResolvedPenalties& w) {
  double s = 0.0;
  for (const auto& r : report.records) s += w.weight(r.kind) * r.normalized;
  return s;
}

struct PlanEvaluation {
  CostBreakdown cost;
  FeasibilityReport feasibility;
  std::vector<StageAdequacy> adequacy;
  double penalty = 0.0;
  double fitness = 0.0;

  bool operator==(const PlanEvaluation&) const = default;
};

/// Binds a problem to its precomputed adequacy model. The problem must
/// outlive the evaluator. evaluate() is const and thread-safe.
class Evaluator {
 public:
  explicit Evaluator(const Problem& problem) : Evaluator(problem, problem.ga.penalty_weights) {}
  Evaluator(const Problem& problem, const PenaltyWeights& weights)
      : problem_(&problem), adequacy_(problem), penalties_(resolve_penalties(problem, weights)) {}

  const Problem& problem() const { return *problem_; }
  const AdequacyModel& adequacy() const { return adequacy_; }
  const ResolvedPenalties& penalties() const { return penalties_; }

  PlanEvaluation evaluate(const ExpansionPlan& plan) const {
    PlanEvaluation e;
    e.adequacy = adequacy_.evaluate(plan);
    e.cost = total_objective(*problem_, plan, e.adequacy);
    e.feasibility = evaluate_feasibility(*problem_, plan, e.adequacy);
    e.penalty = gep::penalty(e.feasibility, penalties_);
    e.fitness = e.cost.total + e.penalty;
    return e;
  }

 private:
  const Problem* problem_;
  AdequacyModel adequacy_;
  ResolvedPenalties penalties_;
};

/// Penalized objective: total cost plus weighted normalized violations.
inline double fitness(const Problem& p, const ExpansionPlan& plan, const PenaltyWeights& weights) {
  const AdequacyModel model(p);
  const auto adequacy = model.evaluate(plan);
  const auto cost = total_objective(p, plan, adequacy);
  const auto report = evaluate_feasibility(p, plan, adequacy);
  return cost.total + penalty(report, resolve_penalties(p, weights));
}

}  // namespace gep
