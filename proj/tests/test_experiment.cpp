#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "uea/cli.hpp"

namespace {

using uea::cli::run_text;
using json = uea::experiment::json;

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream is(line);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

TEST(Cli, ZeroTrialsIsSchemaViolation) {
  const auto o = run_text(
      R"({"cmd":"batch","objective":{"kind":"onemax","n":10},"distribution":{"kind":"rls"},"trials":0})");
  EXPECT_EQ(o.exit_code, uea::cli::kConfigError);
  EXPECT_NE(o.message.find("SchemaViolation"), std::string::npos) << o.message;
  EXPECT_TRUE(o.output.empty());
}

TEST(Cli, ParseErrorIsConfigError) {
  const auto o = run_text("{\"cmd\": ");
  EXPECT_EQ(o.exit_code, uea::cli::kConfigError);
  EXPECT_NE(o.message.find("ConfigParse"), std::string::npos);
}

TEST(Cli, UnknownKeysAndCommandsRejected) {
  EXPECT_EQ(run_text(R"({"cmd":"drift","n":10,"distribution":{"kind":"rls"},"typo":1})").exit_code,
            uea::cli::kConfigError);
  EXPECT_EQ(run_text(R"({"cmd":"dance"})").exit_code, uea::cli::kConfigError);
  EXPECT_EQ(run_text(R"([1,2])").exit_code, uea::cli::kConfigError);
  EXPECT_EQ(run_text(R"({"cmd":"batch","objective":{"kind":"onemax","n":10},"distribution":{"kind":"point","k":11}})")
                .exit_code,
            uea::cli::kConfigError);
}

TEST(Cli, DriftTable) {
  const auto o = run_text(R"({"cmd":"drift","n":1000,"distribution":{"kind":"point","k":1},"d_max":30})");
  ASSERT_EQ(o.exit_code, 0) << o.message;
  const auto ls = lines(o.output);
  ASSERT_EQ(ls.size(), 32u);
  EXPECT_EQ(ls[0], "d,h_tilde,h,inv_h_cumsum");
  const auto row5 = fields(ls[6]);
  EXPECT_EQ(row5[0], "5");
  EXPECT_NEAR(std::stod(row5[2]), 0.005, 1e-15);
  EXPECT_EQ(fields(ls[22])[2], "1000");
}

TEST(Cli, OracleNoDomination) {
  const auto o = run_text(R"({"cmd":"oracle","scenario":"no_domination","n":20})");
  ASSERT_EQ(o.exit_code, 0) << o.message;
  const auto j = json::parse(o.output);
  EXPECT_NEAR(j.at("E_T1").get<double>(), 8000.0, 1e-8);
  EXPECT_NEAR(j.at("E_T2").get<double>(), 545.45, 0.01);
  EXPECT_TRUE(j.contains("config_hash"));
  EXPECT_TRUE(j.contains("master_seed"));
}

TEST(Cli, OracleChainFixedStart) {
  const auto o = run_text(
      R"({"cmd":"oracle","scenario":"chain","objective":{"kind":"onemax","n":4},"distribution":{"kind":"rls"},)"
      R"("start":{"kind":"fixed","bits":"0000"}})");
  ASSERT_EQ(o.exit_code, 0) << o.message;
  EXPECT_NEAR(json::parse(o.output).at("expected_time").get<double>(), 25.0 / 3.0, 1e-12);
}

TEST(Cli, OracleUnreachableIsReported) {
  const auto o = run_text(
      R"({"cmd":"oracle","scenario":"chain","objective":{"kind":"onemax","n":4},"distribution":{"kind":"point","k":4},)"
      R"("start":{"kind":"fixed","bits":"1000"}})");
  EXPECT_EQ(o.exit_code, uea::cli::kConfigError);
  EXPECT_NE(o.message.find("UnreachableOptimum"), std::string::npos) << o.message;
}

TEST(Cli, BatchCsvIsDeterministic) {
  const std::string cfg =
      R"({"cmd":"batch","objective":{"kind":"binval","n":30},"distribution":{"kind":"sbm","c":1},)"
      R"("trials":25,"master_seed":7,"workers":3})";
  const auto a = run_text(cfg);
  const auto b = run_text(cfg);
  ASSERT_EQ(a.exit_code, 0) << a.message;
  EXPECT_EQ(a.output, b.output);
  const auto ls = lines(a.output);
  ASSERT_EQ(ls.size(), 26u);
  EXPECT_EQ(ls[0], "trial,seed,n,iterations,evaluations,hit_optimum,final_fitness");
  const auto first = fields(ls[1]);
  EXPECT_EQ(first[1], std::to_string(uea::trial_seed(7, 0)));
  EXPECT_EQ(first[5], "1");
  EXPECT_EQ(first[6], "1073741823");
}

TEST(Cli, SweepCsv) {
  const auto o = run_text(
      R"({"cmd":"sweep","objective":{"kind":"onemax"},"ns":[20,40],)"
      R"("distributions":[{"kind":"rls"},{"kind":"power_law","beta":2.5}],"trials":10,"master_seed":3})");
  ASSERT_EQ(o.exit_code, 0) << o.message;
  const auto ls = lines(o.output);
  ASSERT_EQ(ls.size(), 5u);
  EXPECT_EQ(ls[0], "n,dist_kind,dist_param,mean_iterations,std_error,ratio_to_nlogn_over_p1");
  EXPECT_EQ(fields(ls[3])[0], "40");
}

TEST(Cli, RunJsonWithTrace) {
  const auto o = run_text(
      R"({"cmd":"run","objective":{"kind":"linear","weights":[1,2,3,4,5]},"distribution":{"kind":"rls"},)"
      R"("master_seed":11,"record_trace":true})");
  ASSERT_EQ(o.exit_code, 0) << o.message;
  const auto j = json::parse(o.output);
  EXPECT_TRUE(j.at("hit_optimum").get<bool>());
  EXPECT_EQ(j.at("final_fitness").get<double>(), 15.0);
  EXPECT_EQ(j.at("trace").back().at(2).get<int>(), 0);
}

TEST(Cli, BoundJson) {
  const auto o = run_text(R"({"cmd":"bound","n":100,"distribution":{"kind":"rls"}})");
  ASSERT_EQ(o.exit_code, 0) << o.message;
  const auto j = json::parse(o.output);
  EXPECT_NEAR(j.at("b_r").get<double>(), 1523.1, 0.05);
}

TEST(Cli, ConfigHashTracksContent) {
  const auto a = json::parse(run_text(R"({"cmd":"bound","n":100,"distribution":{"kind":"rls"}})").output);
  const auto b = json::parse(run_text(R"({"cmd":"bound","n":101,"distribution":{"kind":"rls"}})").output);
  const auto c = json::parse(run_text(R"({"n":100,"cmd":"bound","distribution":{"kind":"rls"}})").output);
  EXPECT_NE(a.at("config_hash"), b.at("config_hash"));
  EXPECT_EQ(a.at("config_hash"), c.at("config_hash"));
}

TEST(Cli, OutPathPassedThrough) {
  const auto o = run_text(R"({"cmd":"drift","n":10,"distribution":{"kind":"rls"},"out":"x.csv"})");
  EXPECT_EQ(o.out_path, "x.csv");
}

TEST(Parse, Distributions) {
  using uea::experiment::parse_distribution;
  EXPECT_EQ(parse_distribution(json::parse(R"({"kind":"point","k_from_end":1})"), 10).support(),
            std::vector<std::size_t>{9});
  const auto c = parse_distribution(json::parse(R"({"kind":"custom","probs":[0,0.5,0.5]})"), 6);
  EXPECT_EQ(c.n(), 6u);
  EXPECT_DOUBLE_EQ(c.mean(), 1.5);
  EXPECT_THROW(parse_distribution(json::parse(R"({"kind":"zipf"})"), 6), uea::Error);
}

TEST(Parse, Objectives) {
  using uea::experiment::parse_objective;
  const auto a = parse_objective(json::parse(R"({"kind":"anchored","n":8,"anchor_weight":"n"})"));
  EXPECT_EQ(a.anchor_weight(), 8.0);
  const auto r1 = parse_objective(json::parse(R"({"kind":"linear","n":20,"random":{"low":1,"high":10,"seed":4}})"));
  const auto r2 = parse_objective(json::parse(R"({"kind":"linear","n":20,"random":{"low":1,"high":10,"seed":4}})"));
  EXPECT_TRUE(std::ranges::equal(r1.weights(), r2.weights()));
  for (double w : r1.weights()) {
    EXPECT_GE(w, 1.0);
    EXPECT_LE(w, 10.0);
  }
  EXPECT_THROW(parse_objective(json::parse(R"({"kind":"linear","n":3,"weights":[1,2]})")), uea::Error);
}

TEST(Verify, QuickCriteriaListed) {
  EXPECT_EQ(uea::verify::Suite::criteria(uea::verify::Level::Quick), (std::vector<int>{1, 2, 3, 4, 9, 10, 11, 12}));
  EXPECT_EQ(uea::verify::Suite::criteria(uea::verify::Level::Full).size(), 12u);
}

}  // namespace
