// Copyright 2026 The assistmpl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "assist/executor.h"

#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "assist/errors.h"
#include "test_util.h"

namespace assist {
namespace {

const Eigen::Vector2d kDiagonal(1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0));

ExecutionConfig ConfigFor(Condition condition, bool abort_enabled = false) {
  ExecutionConfig config;
  config.opt = OptConfig::ForCondition(OptConfig{}, condition);
  config.abort_enabled = abort_enabled;
  return config;
}

TEST(RunEpisodeTest, HighAssistanceAbortsAtFirstStep) {
  const TrainedModel model =
      testing::ConstantModel(Eigen::Vector4d::Zero(), kDiagonal, 0.9);
  for (Condition c : kAllConditions) {
    const ExecutionRecord r = RunEpisode(model, EnvConfig{}, ConfigFor(c, true), 4);
    EXPECT_EQ(r.status, ExecStatus::kAborted) << ToString(c);
    ASSERT_EQ(r.steps.size(), 1u);
    EXPECT_EQ(r.steps[0].t, 1);
    EXPECT_NEAR(r.steps[0].p_predicted, 0.9, 1e-15);
  }
}

TEST(RunEpisodeTest, ThresholdAboveOneNeverAborts) {
  const TrainedModel model =
      testing::ConstantModel(Eigen::Vector4d::Zero(), kDiagonal, 0.9);
  ExecutionConfig config = ConfigFor(Condition::kBPuP, true);
  config.abort_threshold = 1.01;
  const ExecutionRecord r = RunEpisode(model, EnvConfig{}, config, 4);
  EXPECT_NE(r.status, ExecStatus::kAborted);
  const ExecutionRecord off =
      RunEpisode(model, EnvConfig{}, ConfigFor(Condition::kNoBP, false), 4);
  EXPECT_NE(off.status, ExecStatus::kAborted);
}

TEST(RunEpisodeTest, DiagonalModelDrivesStraightToGoal) {
  const TrainedModel model =
      testing::ConstantModel(Eigen::Vector4d::Zero(), kDiagonal, 0.1);
  const EnvConfig env;
  const ExecutionRecord r =
      RunEpisode(model, env, ConfigFor(Condition::kNoBP), 12);
  EXPECT_EQ(r.status, ExecStatus::kReachedGoal);
  EXPECT_EQ(r.env_steps, StraightLineSteps(env));
  for (std::size_t k = 0; k < r.steps.size(); ++k) {
    EXPECT_EQ(r.steps[k].t, static_cast<int>(k) + 1);
    EXPECT_NEAR(r.steps[k].u_executed.norm(), env.agent_max_speed, 1e-12);
  }
}

TEST(RunEpisodeTest, FirstStepStartsFromNominalInput) {
  // A zero-gradient model makes every BP condition keep its initial input,
  // which is the nominal command in normalized units.
  const TrainedModel model = testing::ConstantModel(
      Eigen::Vector4d::Zero(), Eigen::Vector2d(-1, 0), 0.1);
  const EnvConfig env;
  const ExecutionRecord r = RunEpisode(model, env, ConfigFor(Condition::kBPu), 1);
  const Vec2 nominal = NominalInput(Reset(env, 1), env);
  EXPECT_NEAR((r.steps[0].u_executed - nominal).norm(), 0.0, 1e-12);
}

TEST(RunEpisodeTest, Deterministic) {
  const TrainedModel model = testing::RandomModel(8, 6);
  const ExecutionConfig config = ConfigFor(Condition::kBPuP);
  EXPECT_EQ(RunEpisode(model, EnvConfig{}, config, 3),
            RunEpisode(model, EnvConfig{}, config, 3));
}

TEST(RunEpisodeTest, RejectsForeignModel) {
  TrainedModel model;
  model.params = LstmParams::Zeros(5, 4, 5);
  EXPECT_THROW(RunEpisode(model, EnvConfig{}, ConfigFor(Condition::kNoBP), 1),
               ContractError);
}

TEST(EvaluateTest, DiagonalModelMetrics) {
  const TrainedModel model =
      testing::ConstantModel(Eigen::Vector4d::Zero(), kDiagonal, 0.1);
  const EnvConfig env;
  const MetricsTable table =
      Evaluate(model, env, ExecutionConfig{}, kAllConditions, 50, 9);
  ASSERT_EQ(table.rows.size(), 4u);
  ASSERT_EQ(table.episode_seeds.size(), 50u);
  for (const ConditionMetrics& row : table.rows) {
    EXPECT_EQ(row.n_episodes, 50);
    EXPECT_EQ(row.avoid_rate * 50, std::round(row.avoid_rate * 50));
    EXPECT_GE(row.avoid_rate, 0.0);
    EXPECT_LE(row.avoid_rate, 1.0);
  }
  const ConditionMetrics& nobp = table.Row(Condition::kNoBP);
  EXPECT_EQ(nobp.reach_rate, 1.0);
  EXPECT_EQ(nobp.avg_steps, StraightLineSteps(env));
  // Conditions share seeds, so the straight-line avoid count is the
  // fraction of seeds whose obstacle never touches the diagonal run.
  int avoided = 0;
  for (std::uint64_t seed : table.episode_seeds) {
    EnvState s = Reset(env, seed);
    while (s.status == EnvStatus::kRunning) s = Step(s, NominalInput(s, env), env);
    avoided += !s.collided_ever;
  }
  EXPECT_EQ(nobp.avoided, avoided);
}

TEST(EvaluateTest, RejectsZeroEpisodes) {
  const TrainedModel model = testing::RandomModel(4, 1);
  EXPECT_THROW(Evaluate(model, EnvConfig{}, ExecutionConfig{}, kAllConditions,
                        0, 1),
               ContractError);
}

MetricsTable Table(double nobp_avoid, double bpu_reach, double bpu_avoid,
                   double bpu_steps, double bpp_reach, double bpp_steps,
                   double bpup_reach, double bpup_avoid) {
  MetricsTable t;
  auto row = [](Condition c, double reach, double avoid, double steps) {
    ConditionMetrics m;
    m.condition = c;
    m.n_episodes = 50;
    m.reach_rate = reach;
    m.reached = static_cast<int>(std::lround(reach * 50));
    m.avoid_rate = avoid;
    m.avg_steps = steps;
    return m;
  };
  t.rows = {row(Condition::kNoBP, 0.9, nobp_avoid, 60),
            row(Condition::kBPu, bpu_reach, bpu_avoid, bpu_steps),
            row(Condition::kBPp, bpp_reach, 0.5, bpp_steps),
            row(Condition::kBPuP, bpup_reach, bpup_avoid, 80)};
  return t;
}

TEST(CheckOrdinalsTest, ReferenceTablePasses) {
  MetricsTable t;
  for (const ReferenceRow& ref : kReferenceTable) {
    ConditionMetrics m;
    m.condition = ref.condition;
    m.reach_rate = ref.reach_rate;
    m.reached = static_cast<int>(std::lround(ref.reach_rate * 50));
    m.avoid_rate = ref.avoid_rate;
    m.avg_steps = ref.avg_steps;
    t.rows.push_back(m);
  }
  for (const OrdinalCheck& c : CheckOrdinals(t)) EXPECT_TRUE(c.passed) << c.name;
}

TEST(CheckOrdinalsTest, TiesCountAndEachCheckCanFail) {
  // Exact ties on the rate margins are met.
  auto pass = CheckOrdinals(Table(0.75, 0.95, 0.8, 50, 0.8, 66, 0.8, 0.9));
  for (const OrdinalCheck& c : pass) EXPECT_TRUE(c.passed) << c.name;

  auto a1 = CheckOrdinals(Table(0.78, 1, 0.5, 50, 0.8, 90, 0.9, 0.9));
  EXPECT_FALSE(a1[0].passed);
  auto a2 = CheckOrdinals(Table(0.5, 1, 0.82, 50, 0.8, 90, 0.9, 0.9));
  EXPECT_FALSE(a2[1].passed);
  auto b = CheckOrdinals(Table(0.5, 0.94, 0.5, 50, 0.8, 90, 0.9, 0.9));
  EXPECT_FALSE(b[2].passed);
  auto c = CheckOrdinals(Table(0.5, 1, 0.5, 50, 0.8, 64.9, 0.9, 0.9));
  EXPECT_FALSE(c[3].passed);
  auto d = CheckOrdinals(Table(0.5, 1, 0.5, 50, 0.92, 90, 0.9, 0.9));
  EXPECT_FALSE(d[4].passed);
}

TEST(ReportTest, CsvAndJsonCarryRows) {
  const MetricsTable t = Table(0.5, 1, 0.5, 50, 0.8, 90, 0.9, 0.9);
  const std::string csv = MetricsToCsv(t);
  EXPECT_EQ(csv.substr(0, csv.find('\n')),
            "condition,n_episodes,reach_rate,avoid_rate,avg_steps,"
            "avg_steps_capped");
  EXPECT_NE(csv.find("bpup,50,0.9000,0.9000,80.00"), std::string::npos);

  const auto checks = CheckOrdinals(t);
  const auto json =
      nlohmann::json::parse(MetricsToJson(t, checks, R"({"seed":3})"));
  ASSERT_EQ(json["rows"].size(), 4u);
  EXPECT_EQ(json["rows"][1]["reference"]["reach_rate"], 1.0);
  EXPECT_EQ(json["checks"].size(), 5u);
  EXPECT_EQ(json["run_config"]["seed"], 3);
}

}  // namespace
}  // namespace assist
