#pragma once

// Stage-by-stage outage tables for a whole expansion plan.

#include <algorithm>
#include <map>
#include <vector>

#include "gep/planning_model.hpp"
#include "gep/reliability.hpp"

namespace gep {

struct StageAdequacy {
  double lolp = 0.0;
  double eens_mwh = 0.0;
  double pruned_mass = 0.0;

  bool operator==(const StageAdequacy&) const = default;
};

namespace detail {

inline GridKernel convolve_kernels(const GridKernel& a, const GridKernel& b) {
  std::map<long, double> acc;
  for (const auto& [oa, pa] : a)
    for (const auto& [ob, pb] : b) acc[oa + ob] += pa * pb;
  GridKernel out;
  out.reserve(acc.size());
  for (const auto& [o, p] : acc)
    if (p > 0.0) out.emplace_back(o, p);
  return out;
}

}  // namespace detail

/// Precomputes per-type kernels for every build count a plan can contain and
/// the outage table of the existing fleet, then evaluates plans
/// incrementally: table(t) = table(t-1) convolved with the stage-t builds.
/// Immutable after construction; evaluate() may be called concurrently.
class AdequacyModel {
 public:
  explicit AdequacyModel(const Problem& problem) : problem_(&problem) {
    policy_.capacity_step_mw = problem.reliability.capacity_step_mw;
    policy_.prune_threshold = problem.reliability.prune_threshold;
    policy_.saturation_mw = *std::max_element(problem.horizon.peak_load_mw.begin(), problem.horizon.peak_load_mw.end());

    const int T = problem.stage_count();
    kernels_.resize(static_cast<std::size_t>(problem.type_count()));
    base_ = OutageTable(policy_);
    for (int i = 0; i < problem.type_count(); ++i) {
      const UnitType& u = problem.unit(i);
      int max_count = u.existing_units;
      for (int t = 0; t < T; ++t)
        max_count = std::max(max_count, problem.constraints.u_max(t, i) + problem.forced_builds(t, i));
      auto& ks = kernels_[static_cast<std::size_t>(i)];
      ks.push_back(GridKernel{{0, 1.0}});
      const GridKernel one = unit_kernel(u);
      for (int k = 1; k <= std::max(1, max_count); ++k) ks.push_back(detail::convolve_kernels(ks.back(), one));
      if (u.existing_units > 0) base_.apply(ks[static_cast<std::size_t>(u.existing_units)], u.existing_mw());
    }
  }

  const TablePolicy& policy() const { return policy_; }
  const OutageTable& existing_table() const { return base_; }

  /// Outage table of the fleet installed in stage t under `plan` (gene
  /// builds; forced builds are added here).
  OutageTable stage_table(const ExpansionPlan& plan, int stage) const {
    OutageTable table = base_;
    for (int t = 0; t <= stage; ++t) add_stage(table, plan, t);
    return table;
  }

  std::vector<StageAdequacy> evaluate(const ExpansionPlan& plan) const {
    check_plan_shape(*problem_, plan);
    std::vector<StageAdequacy> out;
    out.reserve(static_cast<std::size_t>(plan.stages()));
    OutageTable table = base_;
    for (int t = 0; t < plan.stages(); ++t) {
      add_stage(table, plan, t);
      const LoadDurationCurve ldc = problem_->horizon.ldc(t);
      out.push_back({lolp(table, ldc), eens(table, ldc), table.pruned_mass()});
    }
    return out;
  }

 private:
  GridKernel unit_kernel(const UnitType& u) const {
    if (u.kind == UnitKind::Wind) return multi_state_kernel(u.farm_model->levels, policy_.capacity_step_mw);
    return two_state_kernel(u.unit_capacity_mw, u.for_rate, policy_.capacity_step_mw);
  }

  void add_stage(OutageTable& table, const ExpansionPlan& plan, int t) const {
    for (int i = 0; i < plan.types(); ++i) {
      const int count = plan(t, i) + problem_->forced_builds(t, i);
      if (count <= 0) continue;
      const auto& ks = kernels_[static_cast<std::size_t>(i)];
      const double mw = count * problem_->unit(i).unit_capacity_mw;
      if (static_cast<std::size_t>(count) < ks.size()) {
        table.apply(ks[static_cast<std::size_t>(count)], mw);
      } else {
        for (int k = 0; k < count; ++k) table.apply(ks[1], problem_->unit(i).unit_capacity_mw);
      }
    }
  }

  const Problem* problem_;
  TablePolicy policy_;
  OutageTable base_;
  std::vector<std::vector<GridKernel>> kernels_;
};

}  // namespace gep
