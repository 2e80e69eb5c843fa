#include <gtest/gtest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "gep/config.hpp"
#include "gep/cost_model.hpp"
#include "test_support.hpp"

using namespace gep;
using namespace gep::testing;

namespace {

Problem wind_only(int stages = 7) {
  std::vector<double> peaks;
  for (int t = 0; t < stages; ++t) peaks.push_back(7000 + 2000.0 * t);
  return make_problem({wind()}, peaks);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

// Random catalog of thermal types plus a wind farm, loose constraints.
Problem random_problem(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<UnitType> units;
  const int n = 2 + static_cast<int>(u(rng) * 4);
  for (int i = 0; i < n; ++i)
    units.push_back(thermal("T" + std::to_string(i), FuelClass::Coal, 50 + 50 * std::floor(u(rng) * 10), 0.2 * u(rng),
                            500 + 1500 * u(rng), 60000 * u(rng), 0.05 * u(rng), static_cast<int>(u(rng) * 3), true,
                            0.3 * u(rng)));
  units.push_back(wind());
  std::vector<double> peaks;
  for (int t = 0; t < 3; ++t) peaks.push_back(500 + 1000 * u(rng));
  Problem p = make_problem(units, peaks, 1 + static_cast<int>(u(rng) * 3), 2 * u(rng), 0.12 * u(rng), 4);
  p.horizon.base_load_ratio = 0.2 + 0.8 * u(rng);
  return p;
}

ExpansionPlan random_plan(const Problem& p, std::mt19937_64& rng) {
  ExpansionPlan plan = p.zero_plan();
  for (int t = 0; t < p.stage_count(); ++t)
    for (int i = 0; i < p.type_count(); ++i)
      plan(t, i) = std::uniform_int_distribution<int>(0, p.constraints.u_max(t, i))(rng);
  return plan;
}

}  // namespace

TEST(Discounting, ToBase) {
  EXPECT_DOUBLE_EQ(discount_to_base(89.1, 0, 0.085), 89.1);
  EXPECT_NEAR(discount_to_base(89.1, 2, 0.085), 89.1 / (1.085 * 1.085), 1e-12);
  EXPECT_NEAR(discount_to_base(89.1, 2, 0.085), 75.69, 5e-3);
  EXPECT_DOUBLE_EQ(discount_to_base(89.1, 13, 0.0), 89.1);
}

TEST(Investment, OneWindFarmAtStageOne) {
  const Problem p = wind_only();
  ExpansionPlan plan = p.zero_plan();
  EXPECT_DOUBLE_EQ(investment_cost(p, plan, 0), 0.0);
  plan(0, 0) = 1;
  EXPECT_NEAR(investment_cost(p, plan, 0), 89.1 / std::pow(1.085, 2), 1e-9);
  EXPECT_NEAR(investment_cost(p, plan, 0), 75.69, 5e-3);
}

TEST(Investment, NoLeadTimeIsUndiscounted) {
  const Problem p = make_problem({wind()}, {100, 200}, 3, 0.0);
  ExpansionPlan plan = p.zero_plan();
  plan(0, 0) = 2;
  EXPECT_NEAR(investment_cost(p, plan, 0), 2 * 89.1, 1e-9);
}

TEST(Investment, DeferringIsCheaper) {
  const Problem p = wind_only();
  for (int t = 0; t + 1 < p.stage_count(); ++t) {
    ExpansionPlan a = p.zero_plan(), b = p.zero_plan();
    a(t, 0) = 1;
    b(t + 1, 0) = 1;
    EXPECT_LT(investment_cost(p, b, t + 1), investment_cost(p, a, t));
  }
}

TEST(Salvage, OneWindFarmEndOfHorizon) {
  const Problem p = wind_only();
  ExpansionPlan plan = p.zero_plan();
  EXPECT_DOUBLE_EQ(salvage_value(p, plan), 0.0);
  plan(0, 0) = 1;
  EXPECT_NEAR(salvage_value(p, plan), 8.91 / std::pow(1.085, 16), 1e-12);
  EXPECT_NEAR(salvage_value(p, plan), 2.416, 1e-3);  // quoted value, rounded
  // Single end-of-horizon discounting: the build stage does not matter.
  ExpansionPlan late = p.zero_plan();
  late(6, 0) = 1;
  EXPECT_NEAR(salvage_value(p, late), salvage_value(p, plan), 1e-12);
}

TEST(Salvage, ZeroFactorsGiveZero) {
  const Problem p = make_problem({wind("W", 0.0)}, {100, 200});
  ExpansionPlan plan = p.zero_plan();
  plan(0, 0) = 2;
  plan(1, 0) = 1;
  EXPECT_DOUBLE_EQ(salvage_value(p, plan), 0.0);
}

TEST(Salvage, PerStageOverride) {
  Problem p = make_problem({wind()}, {100, 200}, 1, 0.0, 0.0);
  p.units[0].salvage_factor_by_stage = {0.5, 0.25};
  ExpansionPlan plan = p.zero_plan();
  plan(0, 0) = 1;
  plan(1, 0) = 1;
  EXPECT_NEAR(salvage_value(p, plan), 89.1 * 0.75, 1e-9);
}

TEST(Dispatch, SoleSupplierTakesAllEnergy) {
  const Problem p = make_problem({thermal("A", FuelClass::Coal, 8000, 0.1, 1000, 0, 0.02, 1, false)}, {7000});
  const std::vector<double> x{8000};
  const auto ldc = p.horizon.ldc(0);
  EXPECT_NEAR(dispatch_energy(p, x, ldc)[0], ldc.total_energy(), 1e-6);
}

TEST(Dispatch, RectanglePlusTriangle) {
  // Listed dear-first to check the merit order sort.
  const Problem p = make_problem({thermal("DEAR", FuelClass::Oil, 10000, 0.1, 1000, 0, 0.05, 1, false),
                                  thermal("CHEAP", FuelClass::Coal, 3500, 0.1, 1000, 0, 0.01, 1, false)},
                                 {7000});
  const std::vector<double> x{10000, 3500};
  const auto e = dispatch_energy(p, x, p.horizon.ldc(0));
  EXPECT_NEAR(e[1], 30.66e6, 1e-6);
  EXPECT_NEAR(e[0], 15.33e6, 1e-6);
}

TEST(Dispatch, WindCreditedAtExpectedOutput) {
  const Problem p = make_problem({thermal("A", FuelClass::Coal, 2000, 0.1, 1000, 0, 0.02, 1, false), wind()}, {1000});
  const std::vector<double> x{2000, 60};
  const auto e = dispatch_energy(p, x, p.horizon.ldc(0));
  EXPECT_NEAR(e[1], 11.865144 * 8760, 1e-6);
  EXPECT_NEAR(e[0] + e[1], p.horizon.ldc(0).total_energy(), 1e-6);
}

TEST(Dispatch, TiesKeepCatalogOrder) {
  const Problem p = make_problem({thermal("A", FuelClass::Coal, 400, 0.1, 1000, 0, 0.02, 1, false),
                                  thermal("B", FuelClass::Coal, 400, 0.1, 1000, 0, 0.02, 1, false)},
                                 {600});
  const std::vector<double> x{400, 400};
  const auto e = dispatch_energy(p, x, p.horizon.ldc(0));
  const auto ldc = p.horizon.ldc(0);
  EXPECT_NEAR(e[0], ldc.energy_between(0, 400), 1e-6);
  EXPECT_NEAR(e[1], ldc.energy_between(400, 600), 1e-6);
}

TEST(OmCost, WindFarmFixedCost) {
  const Problem p = wind_only();
  const std::vector<double> x{60}, energy{0};
  const OmCost om = om_cost(p, x, energy, 0);
  // Mid-year discounting of the two years of stage 1 (years 2.5 and 3.5).
  EXPECT_NEAR(om.fixed, 0.69 * (std::pow(1.085, -2.5) + std::pow(1.085, -3.5)), 1e-12);
  EXPECT_NEAR(om.fixed, 1.0813, 5e-4);
  EXPECT_DOUBLE_EQ(om.variable, 0.0);
  const std::vector<double> none{0};
  EXPECT_DOUBLE_EQ(om_cost(p, none, energy, 0).fixed, 0.0);
}

TEST(OmCost, NoDiscountIsStageLengthTimesAnnual) {
  const Problem p = make_problem({wind()}, {100, 200}, 3, 2.0, 0.0);
  const std::vector<double> x{120}, energy{1000};
  const OmCost om = om_cost(p, x, energy, 1);
  EXPECT_NEAR(om.fixed, 3 * 120 * 11500e-6, 1e-12);
  EXPECT_NEAR(om.variable, 3 * 1000 * 2.5e-6, 1e-15);
}

TEST(EensCost, HandArithmetic) {
  const Problem p = make_problem({wind()}, {100, 200}, 2, 2.0, 0.0);
  EXPECT_DOUBLE_EQ(eens_cost(p, 0.0, 0), 0.0);
  EXPECT_NEAR(eens_cost(p, 1000.0, 0), 0.1, 1e-12);
  EXPECT_NEAR(eens_cost(p, 2000.0, 1), 2 * eens_cost(p, 1000.0, 1), 1e-15);
  EXPECT_THROW(eens_cost(p, -1.0, 0), std::invalid_argument);
}

TEST(TotalObjective, SpreadsheetToy) {
  // One 100 MW unit (FOR 0.1) against a flat 80 MW load for one year.
  Problem p = make_problem({thermal("U", FuelClass::Coal, 100, 0.1, 1000, 20000, 0.03, 0, true, 0.2)}, {80}, 1, 0.0,
                           0.1, 1);
  p.horizon.base_load_ratio = 1.0;
  ExpansionPlan plan = p.zero_plan();
  plan(0, 0) = 1;
  const CostBreakdown c = total_objective(p, plan);
  const double mid = std::pow(1.1, -0.5);
  const double energy = 80 * 8760.0;
  EXPECT_NEAR(c.investment, 100.0, 1e-12);
  EXPECT_NEAR(c.salvage, 20.0 / 1.1, 1e-12);
  EXPECT_NEAR(c.fixed_om, 2.0 * mid, 1e-12);
  EXPECT_NEAR(c.variable_om, energy * 0.03e-3 * mid, 1e-12);
  EXPECT_NEAR(c.stage_eens_mwh[0], 0.1 * energy, 1e-6);
  EXPECT_NEAR(c.eens_cost, 0.1 * energy * 0.05e-3 * mid, 1e-12);
  const double total = 100.0 + (2.0 + energy * 0.03e-3 + 0.1 * energy * 0.05e-3) * mid - 20.0 / 1.1;
  EXPECT_LT(rel(c.total, total), 1e-12);
}

TEST(TotalObjective, ZeroPlanHasNoCapitalTerms) {
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  const CostBreakdown c = total_objective(p, p.zero_plan());
  EXPECT_DOUBLE_EQ(c.investment, 0.0);
  EXPECT_DOUBLE_EQ(c.salvage, 0.0);
  EXPECT_GT(c.fixed_om + c.variable_om + c.eens_cost, 0.0);
  EXPECT_LT(rel(c.total, c.operational()), 1e-12);
}

TEST(TotalObjective, BreakdownIdentityAndConservation) {
  std::mt19937_64 rng(21);
  for (int k = 0; k < 100; ++k) {
    const Problem p = random_problem(rng);
    const ExpansionPlan plan = random_plan(p, rng);
    const CostBreakdown c = total_objective(p, plan);
    EXPECT_LT(rel(c.total, c.investment + c.fixed_om + c.variable_om + c.eens_cost - c.salvage), 1e-9);
    if (p.economics.discount_rate >= 0) {
      EXPECT_LE(c.salvage, c.investment + 1e-12);
    }
    const auto x = cumulative_state(p, plan);
    for (int t = 0; t < p.stage_count(); ++t) {
      const auto ldc = p.horizon.ldc(t);
      const auto e = dispatch_energy(p, x.row(t), ldc);
      double credited = 0.0;
      for (int i = 0; i < p.type_count(); ++i) credited += x(t, i) * p.unit(i).dispatch_credit_ratio();
      const double expected = ldc.energy_between(0, std::min(credited, ldc.peak()));
      EXPECT_LT(rel(std::accumulate(e.begin(), e.end(), 0.0), expected), 1e-9);
    }
  }
}

TEST(TotalObjective, CeensIsMonotone) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 20; ++k) {
    Problem p = random_problem(rng);
    const ExpansionPlan plan = random_plan(p, rng);
    const double base = total_objective(p, plan).total;
    p.economics.ceens_per_kwh *= 2;
    EXPECT_GE(total_objective(p, plan).total, base - 1e-9);
  }
}

TEST(TotalObjective, PermutationInvariant) {
  std::mt19937_64 rng(8);
  for (int k = 0; k < 20; ++k) {
    const Problem p = random_problem(rng);
    const ExpansionPlan plan = random_plan(p, rng);
    // Reverse the catalog, keeping the data attached to each type.
    Problem q = p;
    const int N = p.type_count();
    ExpansionPlan qplan = q.zero_plan();
    for (int i = 0; i < N; ++i) {
      q.units[static_cast<std::size_t>(i)] = p.unit(N - 1 - i);
      for (int t = 0; t < p.stage_count(); ++t) {
        q.constraints.u_max(t, i) = p.constraints.u_max(t, N - 1 - i);
        qplan(t, i) = plan(t, N - 1 - i);
      }
    }
    // Ties in variable cost would reorder the merit stack; random costs avoid them.
    EXPECT_LT(rel(total_objective(q, qplan).total, total_objective(p, plan).total), 1e-9);
  }
}
