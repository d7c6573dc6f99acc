#include <gtest/gtest.h>

#include <sstream>

#include "qsurvey/suites.hpp"

using namespace qsurvey;

TEST(Format, ShortestRoundTrip) {
  EXPECT_EQ(format_number(0.1), "0.1");
  EXPECT_EQ(format_number(1.0), "1");
  EXPECT_EQ(format_number(1e-12), "1e-12");
  EXPECT_EQ(format_number(0.7950600976206501), "0.7950600976206501");
  EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
  for (double x : {1.0 / 3.0, 2.0 / 7.0, 6.02214076e23, 1e-300}) {
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
}

TEST(Envelope, OverallPassIsConjunction) {
  ReportEnvelope env;
  env.cases.push_back(approx_case("b", 1.0, 1.0, 0.0, "exact"));
  EXPECT_TRUE(env.overall_pass());
  env.cases.push_back(approx_case("a", 0.0, 2e-12, 1e-12, "exact"));
  EXPECT_FALSE(env.overall_pass());
  env.sort_cases();
  EXPECT_EQ(env.cases.front().name, "a");
}

TEST(Envelope, NonFiniteObservationFails) {
  EXPECT_FALSE(approx_case("x", 0.0, std::nan(""), 1.0, "exact").pass);
  EXPECT_FALSE(info_case("x", std::numeric_limits<double>::infinity(), "exact").pass);
  EXPECT_TRUE(info_case("x", 3.0, "exact").pass);
}

TEST(Envelope, JsonSchemaAndStableHash) {
  ReportEnvelope env;
  env.suite = "identity";
  env.cases.push_back(approx_case("c", 0.5, 0.5, 0.0, "exact"));
  env.cases.push_back(error_case("d", ParameterError("boom")));
  env.started_at = "2020-01-01T00:00:00Z";
  env.duration_ms = 3.0;
  ordered_json j = to_json(env);
  EXPECT_EQ(j["schema_version"], "1.0");
  EXPECT_EQ(j["cases"][1]["message"], "boom");
  EXPECT_TRUE(j["cases"][1]["expected"].is_null());
  EXPECT_TRUE(j["cases"][1]["observed"].is_null());
  EXPECT_FALSE(j["overall_pass"].get<bool>());
  EXPECT_FALSE(j["config"].contains("output_path"));

  // timing does not enter the hash
  ReportEnvelope later = env;
  later.started_at = "2030-06-01T12:00:00Z";
  later.duration_ms = 99.0;
  EXPECT_EQ(to_json(later)["stable_hash"], j["stable_hash"]);
  EXPECT_EQ(stable_region(later).dump(), stable_region(env).dump());

  later.cases[0].observed = 0.5000000000000001;
  EXPECT_NE(to_json(later)["stable_hash"], j["stable_hash"]);

  // key order is fixed
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"schema_version", "suite", "config", "cases",
                                            "overall_pass", "stable_hash", "timing"}));
}

TEST(Hash, Fnv1aKnownValues) {
  EXPECT_EQ(fnv1a64(""), "cbf29ce484222325");
  EXPECT_EQ(fnv1a64("a"), "af63dc4c8601ec8c");
}

TEST(Csv, TrialLogBitExact) {
  std::ostringstream out;
  write_trial_csv(out, {{0, 0.25, 0.5, false}, {1, 0.75, 0.5, true}});
  EXPECT_EQ(out.str(),
            "trial_index,hidden_diameter,relation_diameter,coincidence\n"
            "0,0.25,0.5,0\n"
            "1,0.75,0.5,1\n");
}

TEST(Csv, CasesTable) {
  ReportEnvelope env;
  env.cases.push_back(approx_case("a", 1.0, 0.1, 1.0, "exact"));
  env.cases.push_back(info_case("b", 2.5, "convergence"));
  std::ostringstream out;
  write_cases_csv(out, env);
  EXPECT_EQ(out.str(),
            "name,expected,observed,tolerance,pass,provenance\n"
            "a,1,0.1,1,true,exact\n"
            "b,,2.5,0,true,convergence\n");
}

TEST(Grid, Parsing) {
  EXPECT_EQ(parse_grid("0:1:3"), (std::vector<double>{0.0, 0.5, 1.0}));
  EXPECT_EQ(parse_grid("0.5,2"), (std::vector<double>{0.5, 2.0}));
  EXPECT_EQ(parse_grid("4:9:1"), (std::vector<double>{4.0}));
  EXPECT_THROW(parse_grid("a,b"), ParameterError);
  EXPECT_THROW(parse_grid("0:1"), ParameterError);
  EXPECT_THROW(parse_grid("0:1:0"), ParameterError);
  EXPECT_THROW(parse_grid("0:1:2.5"), ParameterError);
  EXPECT_THROW(parse_grid("1,,2"), ParameterError);
  EXPECT_THROW(parse_grid("nan"), ParameterError);
}

TEST(Config, EveryFlagIsValidated) {
  SuiteConfig ok;
  EXPECT_NO_THROW(validate_config(ok, Command::verify));
  auto rejects = [](auto mutate, Command cmd, const char* msg) {
    SuiteConfig c;
    mutate(c);
    try {
      validate_config(c, cmd);
      ADD_FAILURE() << "accepted invalid config: " << msg;
    } catch (const ParameterError& e) {
      EXPECT_NE(std::string(e.what()).find(msg), std::string::npos) << e.what();
    }
  };
  rejects([](SuiteConfig& c) { c.suite = "everything"; }, Command::verify, "unknown suite");
  rejects([](SuiteConfig& c) { c.manifold = "su3"; }, Command::verify, "manifold");
  rejects([](SuiteConfig& c) { c.n_trials = 10; }, Command::epr, "n_trials below minimum 1000");
  rejects([](SuiteConfig& c) { c.cutoff = 7; }, Command::verify, "cutoff");
  rejects([](SuiteConfig& c) { c.cutoff = 257; }, Command::verify, "cutoff");
  rejects([](SuiteConfig& c) { c.r = 1.5; }, Command::verify, "r must be in [0,1)");
  rejects([](SuiteConfig& c) { c.r = 1.0; }, Command::verify, "r must be in [0,1)");
  rejects([](SuiteConfig& c) { c.r = -0.1; }, Command::verify, "r must be in [0,1)");
  rejects([](SuiteConfig& c) { c.format = "xml"; }, Command::verify, "format");
  rejects([](SuiteConfig& c) { c.grid = "0,4"; }, Command::epr, "grid value 4");
  rejects([](SuiteConfig& c) { c.manifold = "wh"; c.grid = "-1"; }, Command::survey, "grid value");
}

TEST(Survey, RowsMatchClosedForms) {
  SuiteConfig cfg;
  cfg.manifold = "wh";
  cfg.grid = "0,1,2";
  std::vector<SurveyRow> rows;
  ReportEnvelope env = cmd_survey(cfg, rows);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].d, 0.0);
  EXPECT_EQ(rows[0].p, 1.0);
  EXPECT_NEAR(rows[1].d, 0.7950673, 1e-5);
  EXPECT_NEAR(rows[1].p, 0.3678794, 1e-7);
  EXPECT_TRUE(env.overall_pass());

  cfg.manifold = "su2";
  cfg.grid = "0,3.141592653589793";
  cmd_survey(cfg, rows);
  EXPECT_EQ(rows[0].d, 0.0);
  EXPECT_EQ(rows[0].p, 1.0);
  EXPECT_EQ(rows[1].d, 1.0);
  EXPECT_EQ(rows[1].p, 0.0);
}

TEST(Verify, ModuleErrorsBecomeFailedCases) {
  SuiteConfig cfg;
  cfg.suite = "bell";
  cfg.manifold = "wh";
  cfg.r = 0.9;  // needs n_max >= 174 for the twisted vacuum
  ReportEnvelope env = cmd_verify(cfg);
  EXPECT_FALSE(env.overall_pass());
  bool found = false;
  for (const auto& c : env.cases) {
    if (c.provenance == "error") {
      found = true;
      EXPECT_NE(c.message.find("174"), std::string::npos);
    }
  }
  EXPECT_TRUE(found);
}

TEST(Verify, IdentitySuiteCasesAreSorted) {
  SuiteConfig cfg;
  cfg.suite = "identity";
  ReportEnvelope env = cmd_verify(cfg);
  ASSERT_FALSE(env.cases.empty());
  EXPECT_EQ(env.cases.front().name, "identity_resolution");
  EXPECT_TRUE(env.overall_pass());
  for (std::size_t i = 1; i < env.cases.size(); ++i) EXPECT_LT(env.cases[i - 1].name, env.cases[i].name);
}
