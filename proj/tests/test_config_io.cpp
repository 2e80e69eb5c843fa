#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "gep/config.hpp"
#include "gep/io.hpp"

using namespace gep;
using nlohmann::json;

namespace {

json bundled() { return json::parse(read_text_file(GEP_DATA_DIR "/paper_system.json")); }

// Path reported by the ConfigError thrown for `doc`, or "" when it loads.
std::string error_path(const json& doc) {
  try {
    problem_from_json(doc);
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "";
}

class TempDir {
 public:
  TempDir() {
    dir_ = std::filesystem::temp_directory_path() /
           ("gep_io_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() { std::filesystem::remove_all(dir_); }
  std::string file(const std::string& name) const { return (dir_ / name).string(); }

 private:
  std::filesystem::path dir_;
};

}  // namespace

TEST(Config, BundledFilesRoundTrip) {
  for (const char* name : {"/paper_system.json", "/toy_nine_plans.json"}) {
    const Problem p = load_problem(std::string(GEP_DATA_DIR) + name);
    const Problem q = problem_from_json(problem_to_json(p));
    EXPECT_EQ(p, q) << name;
    EXPECT_EQ(config_hash(p), config_hash(q));
  }
}

TEST(Config, HashTracksContent) {
  Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  const auto h = config_hash(p);
  EXPECT_EQ(h, config_hash(load_problem(GEP_DATA_DIR "/paper_system.json")));
  p.economics.discount_rate += 0.001;
  EXPECT_NE(h, config_hash(p));
}

TEST(Config, BundledSystemValues) {
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  const auto w = p.index_of("WIND");
  ASSERT_TRUE(w);
  const UnitType& u = p.unit(*w);
  EXPECT_EQ(u.unit_capacity_mw, 60);
  EXPECT_EQ(u.invest_cost_per_kw, 1485);
  EXPECT_EQ(u.fixed_om_per_mw_year, 11500);
  EXPECT_EQ(u.variable_om_per_kwh, 0.0025);
  EXPECT_EQ(p.horizon.peak_load_mw, (std::vector<double>{7000, 9000, 11000, 13000, 15000, 17000, 19000}));
  EXPECT_EQ(p.economics.discount_rate, 0.085);
  EXPECT_EQ(p.economics.ceens_per_kwh, 0.05);
  EXPECT_EQ(p.constraints.lolp_max, 0.01);
  EXPECT_EQ(p.wind_models.count("weak"), 1u);
  EXPECT_EQ(p.wind_models.count("strong"), 1u);
}

TEST(Config, UnknownKeysNamePath) {
  json d = bundled();
  d["units"][2]["colour"] = "red";
  EXPECT_EQ(error_path(d), "$.units[2].colour");
  d = bundled();
  d["ga"]["populaton_size"] = 10;
  EXPECT_EQ(error_path(d), "$.ga.populaton_size");
  d = bundled();
  d["surprise"] = 1;
  EXPECT_EQ(error_path(d), "$.surprise");
}

TEST(Config, MissingAndMistypedValuesNamePath) {
  json d = bundled();
  d["units"][0].erase("invest_cost_per_kw");
  EXPECT_EQ(error_path(d), "$.units[0].invest_cost_per_kw");
  d = bundled();
  d["horizon"]["years_per_stage"] = "two";
  EXPECT_EQ(error_path(d), "$.horizon.years_per_stage");
  d = bundled();
  d["horizon"]["peak_load_mw"].erase(0);
  EXPECT_EQ(error_path(d), "$.horizon.peak_load_mw");
  d = bundled();
  d["constraints"]["fuel_mix"]["PEAT"] = {{"min", 0}};
  EXPECT_EQ(error_path(d), "$.constraints.fuel_mix.PEAT");
  EXPECT_THROW(problem_from_string("{ not json"), ConfigError);
}

TEST(Config, InvariantViolationsAreRejected) {
  json d = bundled();
  d["units"][0]["for_rate"] = 1.0;
  EXPECT_EQ(error_path(d), "$.units[0]");
  d = bundled();
  d["units"][0]["unit_capacity_mw"] = 0;
  EXPECT_EQ(error_path(d), "$.units[0]");
  d = bundled();
  d["economics"]["discount_rate"] = -1.0;
  EXPECT_FALSE(error_path(d).empty());
  d = bundled();
  d["constraints"]["reserve_min"] = 0.5;
  d["constraints"]["reserve_max"] = 0.4;
  EXPECT_FALSE(error_path(d).empty());
}

TEST(Config, BuildLimitDefaults) {
  json d = bundled();
  // Non-candidates default to no builds; candidates must say how many.
  d["units"][0]["candidate"] = false;
  d["units"][0].erase("u_max");
  const Problem p = problem_from_json(d);
  for (int t = 0; t < p.stage_count(); ++t) EXPECT_EQ(p.constraints.u_max(t, 0), 0);
  d = bundled();
  d["units"][0].erase("u_max");
  EXPECT_EQ(error_path(d), "$.units[0].u_max");
  d = bundled();
  d["units"][0]["u_max"] = {1, 2, 3};
  EXPECT_EQ(error_path(d), "$.units[0].u_max");
}

TEST(Config, WindUnitsNeedAFarmModel) {
  json d = bundled();
  for (auto& u : d["units"])
    if (u["kind"] == "wind") u.erase("farm_model");
  EXPECT_NE(error_path(d).find(".farm_model"), std::string::npos);
  d = bundled();
  for (auto& u : d["units"])
    if (u["kind"] == "wind") u["farm_model"] = "gale";
  EXPECT_NE(error_path(d).find(".farm_model"), std::string::npos);
}

TEST(Config, MissingFileIsIoError) { EXPECT_THROW(load_problem("/nonexistent/config.json"), IoError); }

TEST(PlanCsv, RoundTrip) {
  const TempDir dir;
  const Problem p = load_problem(GEP_DATA_DIR "/paper_system.json");
  ExpansionPlan plan = p.zero_plan();
  for (int t = 0; t < p.stage_count(); ++t)
    for (int i = 0; i < p.type_count(); ++i) plan(t, i) = (t + 2 * i) % (p.constraints.u_max(t, i) + 1);
  const std::string text = plan_csv(p, plan, {42, config_hash(p)});
  EXPECT_EQ(text.rfind("# seed=42 config_hash=", 0), 0u);
  write_text_file(dir.file("plan.csv"), text);
  EXPECT_EQ(read_plan(p, dir.file("plan.csv")), plan);
}

TEST(PlanCsv, MissingColumnsAreZero) {
  const TempDir dir;
  const Problem p = load_problem(GEP_DATA_DIR "/toy_nine_plans.json");
  write_text_file(dir.file("plan.csv"), "stage,NUKE\n1,2\n");
  const ExpansionPlan plan = read_plan(p, dir.file("plan.csv"));
  EXPECT_EQ(plan(0, *p.index_of("NUKE")), 2);
  EXPECT_EQ(plan(0, *p.index_of("PEAKER")), 0);
}

TEST(PlanCsv, ReadErrors) {
  const TempDir dir;
  const Problem p = load_problem(GEP_DATA_DIR "/toy_nine_plans.json");
  const auto fails = [&](const std::string& body) {
    write_text_file(dir.file("bad.csv"), body);
    EXPECT_THROW(read_plan(p, dir.file("bad.csv")), IoError) << body;
  };
  fails("");
  fails("step,NUKE\n1,2\n");
  fails("stage,HYDRO\n1,2\n");
  fails("stage,NUKE\n1,2\n2,1\n");
  fails("stage,NUKE\n1,1.5\n");
  fails("stage,NUKE,PEAKER\n1,1\n");
  EXPECT_THROW(read_plan(p, dir.file("absent.csv")), IoError);
}

TEST(Csv, NumericRowsSkipHeaderAndComments) {
  const TempDir dir;
  write_text_file(dir.file("levels.csv"), "# seed=1 config_hash=0\npower_mw,probability\n0,0.25\n60,0.75\n");
  const auto levels = read_levels(dir.file("levels.csv"));
  ASSERT_EQ(levels.size(), 2u);
  EXPECT_EQ(levels[1].power_mw, 60);
  EXPECT_EQ(levels[1].probability, 0.75);
  write_text_file(dir.file("bad.csv"), "power_mw,probability\n0,x\n");
  EXPECT_THROW(read_levels(dir.file("bad.csv")), IoError);
}

TEST(Csv, DoublesSurviveTextRoundTrip) {
  for (double x : {0.1, 1.0 / 3.0, 11.865144, 1e-17, 17136.679}) {
    double y = 0;
    ASSERT_TRUE(detail::parse_double(format_double(x), y));
    EXPECT_EQ(x, y);
  }
}
