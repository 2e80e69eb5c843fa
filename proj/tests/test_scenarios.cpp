#include <gtest/gtest.h>

#include "gep/config.hpp"
#include "gep/scenarios.hpp"

using namespace gep;

namespace {

Problem bundled() { return load_problem(GEP_DATA_DIR "/paper_system.json"); }

Problem small(Problem p) {
  p.ga.population_size = 8;
  p.ga.generations = 2;
  p.ga.elite_count = 1;
  p.ga.mutants_per_generation = 1;
  p.ga.runs = 1;
  return p;
}

SweepPoint point(double input, bool feasible, bool lolp) {
  SweepPoint pt;
  pt.input = input;
  pt.feasible = feasible;
  pt.lolp_violated = lolp;
  return pt;
}

}  // namespace

TEST(Penetration, HorizonEndWindOverFinalPeak) {
  const Problem p = bundled();
  const int w = wind_index(p, "");
  ExpansionPlan plan = p.zero_plan();
  EXPECT_DOUBLE_EQ(penetration_percent(p, plan), 0.0);
  for (int t = 0; t < p.stage_count(); ++t) plan(t, w) = 1;
  EXPECT_NEAR(penetration_percent(p, plan), 100.0 * 7 * 60 / 19000.0, 1e-12);
  const Problem fixed = with_fixed_wind(p, w, 2);
  EXPECT_NEAR(penetration_percent(fixed, fixed.zero_plan()), 100.0 * 14 * 60 / 19000.0, 1e-12);
}

TEST(Transforms, FixedWindLeavesGeneSpace) {
  const Problem p = bundled();
  const int w = wind_index(p, "WIND");
  const Problem q = with_fixed_wind(p, w, 3);
  const auto& active = GeneSpace(q).active_types();
  EXPECT_EQ(std::find(active.begin(), active.end(), w), active.end());
  EXPECT_EQ(GeneSpace(q).genes_per_stage(), GeneSpace(p).genes_per_stage() - 1);
  const ExpansionPlan all = total_builds(q, q.zero_plan());
  for (int t = 0; t < q.stage_count(); ++t) EXPECT_EQ(all(t, w), 3);
}

TEST(Transforms, RegimeSwapsFarmModel) {
  const Problem p = bundled();
  const int w = wind_index(p, "");
  const Problem q = with_regime(p, w, "strong");
  EXPECT_EQ(q.unit(w).farm_model_name, "strong");
  EXPECT_EQ(q.unit(w).farm_model, p.wind_models.at("strong").farm);
  EXPECT_EQ(with_regime(p, w, ""), p);
  EXPECT_THROW(with_regime(p, w, "gale"), InvariantError);
}

TEST(Transforms, InvestmentCost) {
  const Problem p = bundled();
  const int w = wind_index(p, "");
  const Problem q = with_wind_investment(p, w, 1320);
  EXPECT_EQ(q.unit(w).invest_cost_per_kw, 1320);
  ExpansionPlan plan = p.zero_plan();
  plan(0, w) = 1;
  EXPECT_LT(investment_cost(q, plan, 0), investment_cost(p, plan, 0));
}

TEST(Transforms, ExcludeTypes) {
  const Problem p = bundled();
  const Problem q = exclude_types(p, {"WIND"});
  EXPECT_EQ(q.type_count(), p.type_count() - 1);
  EXPECT_FALSE(q.index_of("WIND"));
  for (int i = 0; i < q.type_count(); ++i) {
    const int j = *p.index_of(q.unit(i).id);
    for (int t = 0; t < q.stage_count(); ++t) EXPECT_EQ(q.constraints.u_max(t, i), p.constraints.u_max(t, j));
  }
  EXPECT_THROW(exclude_types(p, {"HYDRO"}), InvariantError);
  std::vector<std::string> all;
  for (const auto& u : p.units) all.push_back(u.id);
  EXPECT_THROW(exclude_types(p, all), InvariantError);
}

TEST(Transforms, WindLookup) {
  const Problem p = bundled();
  EXPECT_THROW(wind_index(p, "COAL"), InvariantError);
  EXPECT_THROW(wind_index(p, "HYDRO"), InvariantError);
  EXPECT_THROW(wind_index(exclude_types(p, {"WIND"}), ""), InvariantError);
}

TEST(Sweep, SpecValidation) {
  EXPECT_THROW(validate(SweepSpec{SweepMode::Penetration, {}, "", ""}), InvariantError);
  EXPECT_THROW(validate(SweepSpec{SweepMode::Penetration, {1.5}, "", ""}), InvariantError);
  EXPECT_THROW(validate(SweepSpec{SweepMode::Penetration, {-1}, "", ""}), InvariantError);
  EXPECT_THROW(validate(SweepSpec{SweepMode::Investment, {0}, "", ""}), InvariantError);
  EXPECT_NO_THROW(validate(SweepSpec{SweepMode::Investment, {1650, 1320}, "", ""}));
}

TEST(Sweep, MaxFeasibleInputStopsAtFirstInfeasiblePoint) {
  ExperimentResult r;
  r.points = {point(0, true, false), point(2, true, false), point(4, false, false), point(6, true, false),
              point(8, false, true)};
  EXPECT_EQ(r.first_infeasible(), 2u);
  EXPECT_EQ(r.first_lolp_violation(), 4u);
  EXPECT_EQ(r.max_feasible_input(), 2.0);
  r.points[0].feasible = false;
  EXPECT_FALSE(r.max_feasible_input());
  r.points = {point(0, true, false), point(1, true, false)};
  EXPECT_EQ(r.max_feasible_input(), 1.0);
  EXPECT_FALSE(r.first_infeasible());
}

TEST(Sweep, PenetrationPointsCarryFixedWind) {
  const Problem p = small(bundled());
  const auto res = run_sweep(p, {SweepMode::Penetration, {0, 2}, "weak", ""});
  ASSERT_EQ(res.points.size(), 2u);
  for (const auto& pt : res.points) {
    ASSERT_EQ(pt.wind_units.size(), 7u);
    for (int n : pt.wind_units) EXPECT_EQ(n, static_cast<int>(pt.input));
    EXPECT_NEAR(pt.penetration_pct, 100.0 * 7 * 60 * pt.input / 19000.0, 1e-12);
    EXPECT_EQ(pt.lolp.size(), 7u);
    EXPECT_NEAR(pt.total_cost, total_objective(sweep_problem(p, {SweepMode::Penetration, {}, "weak", ""}, pt.input),
                                               pt.plan)
                                   .total,
                1e-9 * pt.total_cost);
  }
}

TEST(Sweep, ZeroFarmsMatchesRunWithoutWind) {
  const Problem p = small(bundled());
  const auto res = run_sweep(p, {SweepMode::Penetration, {0}, "", ""});
  const Problem no_wind = exclude_types(p, {"WIND"});
  const auto run = multi_run(no_wind, no_wind.ga);
  EXPECT_NEAR(res.points[0].total_cost, run.best.best.cost.total, 1e-9 * run.best.best.cost.total);
  EXPECT_NEAR(res.points[0].fitness, run.best.best.fitness, 1e-9 * run.best.best.fitness);
}

TEST(Sweep, InvestmentPointsUseTheirCost) {
  const Problem p = small(bundled());
  const SweepSpec spec{SweepMode::Investment, {1650, 1320}, "", ""};
  const auto res = run_sweep(p, spec);
  ASSERT_EQ(res.points.size(), 2u);
  for (const auto& pt : res.points) {
    const Problem q = sweep_problem(p, spec, pt.input);
    EXPECT_EQ(q.unit(wind_index(q, "")).invest_cost_per_kw, pt.input);
    EXPECT_NEAR(pt.total_cost, total_objective(q, pt.plan).total, 1e-9 * pt.total_cost);
  }
}
