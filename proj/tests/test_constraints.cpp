#include <gtest/gtest.h>

#include <random>

#include "gep/config.hpp"
#include "gep/constraints.hpp"
#include "gep/evaluator.hpp"
#include "test_support.hpp"

using namespace gep;
using namespace gep::testing;

namespace {

Problem mix_problem() {
  Problem p = make_problem({thermal("OIL", FuelClass::Oil, 100, 0.1, 800, 0, 0.04, 10),
                            thermal("COAL", FuelClass::Coal, 100, 0.1, 1000, 0, 0.02, 10), wind()},
                           {5000});
  p.constraints.fuel_mix = {{FuelClass::Oil, {0.0, 0.3}}, {FuelClass::Coal, {0.2, 0.6}}};
  p.constraints.reserve_min = 0.15;
  p.constraints.reserve_max = 0.40;
  p.constraints.lolp_max = 0.01;
  validate(p);
  return p;
}

const ConstraintRecord* find(const std::vector<ConstraintRecord>& rs, const std::string& subject) {
  for (const auto& r : rs)
    if (r.subject == subject) return &r;
  return nullptr;
}

}  // namespace

TEST(BuildLimits, BoundsAreInclusive) {
  const Problem p = mix_problem();
  ExpansionPlan plan = p.zero_plan();
  for (const auto& r : check_build_limits(p, plan)) EXPECT_DOUBLE_EQ(r.violation, 0.0);
  for (int i = 0; i < p.type_count(); ++i) plan(0, i) = p.constraints.u_max(0, i);
  for (const auto& r : check_build_limits(p, plan)) EXPECT_DOUBLE_EQ(r.violation, 0.0);
  plan(0, 1) = p.constraints.u_max(0, 1) + 2;
  const auto* r = find(check_build_limits(p, plan), "COAL");
  ASSERT_NE(r, nullptr);
  EXPECT_DOUBLE_EQ(r->violation, 2.0);
}

TEST(BuildLimits, BelowMinimumCounts) {
  Problem p = mix_problem();
  p.constraints.u_min(0, 2) = 1;
  const auto* r = find(check_build_limits(p, p.zero_plan()), "WIND");
  ASSERT_NE(r, nullptr);
  EXPECT_DOUBLE_EQ(r->violation, 1.0);
}

TEST(FuelMix, ShareAgainstBand) {
  const Problem p = mix_problem();
  // OIL 1000, COAL 1000, other 8000 (wind, unbounded).
  const std::vector<double> x{1000, 1000, 8000};
  const auto rs = check_fuel_mix(p, x, 0);
  ASSERT_EQ(rs.size(), 2u);
  const auto* oil = find(rs, "OIL");
  const auto* coal = find(rs, "COAL");
  EXPECT_DOUBLE_EQ(oil->measured, 0.1);
  EXPECT_DOUBLE_EQ(oil->violation, 0.0);
  EXPECT_DOUBLE_EQ(coal->measured, 0.1);
  EXPECT_NEAR(coal->violation, 0.1, 1e-15);
  EXPECT_EQ(find(rs, "WIND"), nullptr);
  EXPECT_THROW(check_fuel_mix(p, std::vector<double>{0, 0, 0}, 0), std::invalid_argument);
}

TEST(Reserve, ExistingFleetAgainstBaseYearPeak) {
  const Problem p = mix_problem();
  const std::vector<double> x{5100};
  const auto r = check_reserve(p, x, 5000, 0);
  EXPECT_NEAR(reserve_margin(5100, 5000), 0.02, 1e-15);
  EXPECT_NEAR(r.violation, 650.0, 1e-9);
  EXPECT_NEAR(r.normalized, 0.13, 1e-12);
}

TEST(Reserve, BandEdges) {
  const Problem p = mix_problem();
  EXPECT_DOUBLE_EQ(check_reserve(p, std::vector<double>{1.15 * 7000}, 7000, 0).violation, 0.0);
  EXPECT_DOUBLE_EQ(check_reserve(p, std::vector<double>{1.40 * 7000}, 7000, 0).violation, 0.0);
  EXPECT_NEAR(check_reserve(p, std::vector<double>{1.5 * 7000}, 7000, 0).violation, 0.1 * 7000, 1e-9);
  EXPECT_THROW(check_reserve(p, std::vector<double>{1}, 0, 0), std::invalid_argument);
}

TEST(Lolp, ViolationAboveBound) {
  Problem p = mix_problem();
  const auto table = convolve_two_state(empty_table({1.0, 0.0, std::nullopt}), 100, 0.1);
  const auto flat = build_ldc(50, 1.0, 8760);
  const auto r = check_lolp(p, table, flat, 0);
  EXPECT_NEAR(r.measured, 0.1, 1e-15);
  EXPECT_NEAR(r.violation, 0.09, 1e-15);
  EXPECT_DOUBLE_EQ(check_lolp(p, 0.0, 0).violation, 0.0);
  p.constraints.lolp_max = 1.0;
  EXPECT_DOUBLE_EQ(check_lolp(p, table, flat, 0).violation, 0.0);
}

TEST(Feasibility, ZeroPlanOnBundledSystemFailsFromStageOne) {
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  const auto report = evaluate_feasibility(p, p.zero_plan());
  EXPECT_FALSE(report.feasible());
  for (int t = 0; t < p.stage_count(); ++t) {
    double reserve = 0, lolp = 0;
    for (const auto& r : report.records)
      if (r.stage == t) {
        if (r.kind == ConstraintKind::Reserve) reserve += r.violation;
        if (r.kind == ConstraintKind::Lolp) lolp += r.violation;
      }
    EXPECT_GT(reserve, 0.0) << "stage " << t + 1;
    EXPECT_GT(lolp, 0.0) << "stage " << t + 1;
  }
  const auto* first = report.first_violation();
  ASSERT_NE(first, nullptr);
  EXPECT_EQ(first->stage, 0);
}

TEST(Feasibility, ConstructedFeasiblePlan) {
  // 2000 MW of perfectly reliable coal against a 1000 MW peak.
  Problem p = make_problem({thermal("COAL", FuelClass::Coal, 500, 0.0, 1000, 0, 0.02, 2)}, {1000});
  p.constraints.fuel_mix = {{FuelClass::Coal, {0.2, 1.0}}};
  p.constraints.reserve_min = 0.15;
  p.constraints.reserve_max = 1.5;
  p.constraints.lolp_max = 0.01;
  ExpansionPlan plan = p.zero_plan();
  plan(0, 0) = 2;
  const auto report = evaluate_feasibility(p, plan);
  EXPECT_TRUE(report.feasible());
  EXPECT_EQ(report.violation_count(), 0);
  EXPECT_EQ(report.first_violation(), nullptr);
  EXPECT_EQ(evaluate_feasibility(p, plan), report);
}

TEST(Feasibility, CountsAndMagnitudes) {
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    ExpansionPlan plan = p.zero_plan();
    for (int t = 0; t < p.stage_count(); ++t)
      for (int i = 0; i < p.type_count(); ++i)
        plan(t, i) = std::uniform_int_distribution<int>(0, p.constraints.u_max(t, i) + 1)(rng);
    const auto report = evaluate_feasibility(p, plan);
    int count = 0;
    for (const auto& r : report.records) {
      EXPECT_GE(r.violation, 0.0);
      EXPECT_GE(r.normalized, 0.0);
      count += r.violation > 0.0;
    }
    EXPECT_EQ(report.violation_count(), count);
    EXPECT_EQ(report.feasible(), count == 0);
  }
}

TEST(Feasibility, MoreCapacityNeverRaisesLolpOrReserveShortfall) {
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  const AdequacyModel model(p);
  std::mt19937_64 rng(12);
  for (int k = 0; k < 10; ++k) {
    ExpansionPlan plan = p.zero_plan();
    for (int t = 0; t < p.stage_count(); ++t)
      for (int i = 0; i < p.type_count(); ++i)
        plan(t, i) = std::uniform_int_distribution<int>(0, p.constraints.u_max(t, i) / 2)(rng);
    const auto before = model.evaluate(plan);
    const auto x0 = cumulative_state(p, plan);
    const int t = std::uniform_int_distribution<int>(0, p.stage_count() - 1)(rng);
    const int i = std::uniform_int_distribution<int>(0, p.type_count() - 1)(rng);
    plan(t, i) += 1;
    const auto after = model.evaluate(plan);
    const auto x1 = cumulative_state(p, plan);
    for (int s = 0; s < p.stage_count(); ++s) {
      EXPECT_LE(after[static_cast<std::size_t>(s)].lolp, before[static_cast<std::size_t>(s)].lolp + 1e-12);
      const double peak = p.horizon.peak_load_mw[static_cast<std::size_t>(s)];
      const double lo = (1 + p.constraints.reserve_min) * peak;
      double tot0 = 0, tot1 = 0;
      for (int j = 0; j < p.type_count(); ++j) {
        tot0 += x0(s, j);
        tot1 += x1(s, j);
      }
      EXPECT_LE(std::max(0.0, lo - tot1), std::max(0.0, lo - tot0));
    }
  }
}

TEST(Penalty, AdditiveOnViolations) {
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  const Evaluator ev(p);
  const auto e = ev.evaluate(p.zero_plan());
  double expected = 0;
  for (const auto& r : e.feasibility.records) expected += ev.penalties().weight(r.kind) * r.normalized;
  EXPECT_NEAR(e.penalty, expected, 1e-9 * expected);
  EXPECT_DOUBLE_EQ(e.fitness, e.cost.total + e.penalty);
  EXPECT_NEAR(e.fitness, fitness(p, p.zero_plan(), p.ga.penalty_weights), 1e-9 * e.fitness);
}

TEST(Penalty, FeasiblePlanFitnessIsTotal) {
  Problem p = make_problem({thermal("COAL", FuelClass::Coal, 500, 0.0, 1000, 0, 0.02, 3)}, {1000});
  const Evaluator ev(p);
  const auto e = ev.evaluate(p.zero_plan());
  EXPECT_TRUE(e.feasibility.feasible());
  EXPECT_DOUBLE_EQ(e.penalty, 0.0);
  EXPECT_DOUBLE_EQ(e.fitness, e.cost.total);
}

TEST(Penalty, LargerViolationCostsMore) {
  Problem p = mix_problem();
  const Evaluator ev(p);
  ExpansionPlan a = p.zero_plan(), b = p.zero_plan();
  a(0, 1) = 1;  // 2100 MW against a 5750 MW floor
  b(0, 1) = 2;  // 2200 MW
  EXPECT_GT(ev.evaluate(a).penalty, ev.evaluate(b).penalty);
}
