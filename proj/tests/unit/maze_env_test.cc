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

#include "assist/maze_env.h"

#include <cmath>
#include <set>
#include <utility>

#include <gtest/gtest.h>

#include "assist/errors.h"

namespace assist {
namespace {

EnvConfig QuietEnv() {
  EnvConfig env;
  env.obstacle_bias = 0.0;
  env.obstacle_noise = 0.0;
  return env;
}

EnvState StateAt(const Vec2& agent, const Vec2& obstacle) {
  EnvState s;
  s.agent = agent;
  s.obstacle = obstacle;
  return s;
}

TEST(StepTest, IntegratesVelocity) {
  const EnvConfig env = QuietEnv();
  const EnvState next = Step(StateAt({0, 0}, {100, 10}), Vec2(1, 1), env);
  EXPECT_EQ(next.agent, Vec2(1, 1));
  EXPECT_EQ(next.t, 1);
  EXPECT_EQ(next.status, EnvStatus::kRunning);
}

TEST(StepTest, ClampsSpeed) {
  const EnvConfig env = QuietEnv();
  const EnvState next = Step(StateAt({50, 50}, {0, 120}), Vec2(6, 8), env);
  EXPECT_NEAR((next.agent - Vec2(50, 50)).norm(), 3.5, 1e-12);
  EXPECT_NEAR(next.agent.x(), 50 + 3.5 * 0.6, 1e-12);
}

TEST(StepTest, ClipsToWorld) {
  const EnvConfig env = QuietEnv();
  const EnvState next = Step(StateAt({1, 127}, {60, 60}), Vec2(-3, 3), env);
  EXPECT_EQ(next.agent.x(), 0.0);
  EXPECT_EQ(next.agent.y(), 128.0);
}

TEST(StepTest, CoincidentObstacleCollides) {
  const EnvConfig env = QuietEnv();
  const EnvState next = Step(StateAt({40, 40}, {40, 40}), Vec2::Zero(), env);
  EXPECT_TRUE(next.collided_ever);
}

TEST(StepTest, CollisionIsSticky) {
  const EnvConfig env = QuietEnv();
  EnvState s = Step(StateAt({40, 40}, {40, 40}), Vec2::Zero(), env);
  for (int k = 0; k < 4; ++k) s = Step(s, Vec2(3, 0), env);
  EXPECT_GT((s.agent - s.obstacle).norm(), 8.0);
  EXPECT_TRUE(s.collided_ever);
}

TEST(StepTest, ObstacleChasesAtBiasSpeed) {
  EnvConfig env = QuietEnv();
  env.obstacle_bias = 0.5;
  const EnvState next = Step(StateAt({0, 0}, {30, 40}), Vec2::Zero(), env);
  // unit(agent - obstacle) = (-0.6, -0.8), speed 0.5 * 2.5.
  EXPECT_NEAR(next.obstacle.x(), 30 - 0.6 * 1.25, 1e-12);
  EXPECT_NEAR(next.obstacle.y(), 40 - 0.8 * 1.25, 1e-12);
}

TEST(StepTest, ObstacleSpeedIsCapped) {
  EnvConfig env;
  env.obstacle_noise = 50.0;
  EnvState s = Reset(env, 3);
  for (int k = 0; k < 20; ++k) {
    const EnvState next = Step(s, Vec2::Zero(), env);
    EXPECT_LE((next.obstacle - s.obstacle).norm(), env.obstacle_speed + 1e-12);
    s = next;
  }
}

TEST(StepTest, GoalAndTimeLimit) {
  EnvConfig env = QuietEnv();
  EnvState near_goal = StateAt({124, 124}, {10, 10});
  EXPECT_EQ(Step(near_goal, Vec2(1, 1), env).status, EnvStatus::kReachedGoal);

  env.max_steps = 2;
  EnvState s = StateAt({10, 10}, {100, 10});
  s = Step(s, Vec2::Zero(), env);
  s = Step(s, Vec2::Zero(), env);
  EXPECT_EQ(s.status, EnvStatus::kDone);
  EXPECT_THROW(Step(s, Vec2::Zero(), env), ContractError);
}

TEST(NominalInputTest, Examples) {
  const EnvConfig env;
  const Vec2 u = NominalInput(StateAt({0, 0}, {50, 50}), env);
  EXPECT_NEAR(u.x(), 3.5 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(u.y(), 3.5 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(NominalInput(StateAt({128, 128}, {0, 0}), env), Vec2::Zero());
  const Vec2 v = NominalInput(StateAt({128, 0}, {0, 0}), env);
  // Goal straight above: no x component, full speed in +y.
  EXPECT_EQ(v.x(), 0.0);
  EXPECT_NEAR(v.y(), 3.5, 1e-12);
  const Vec2 w = NominalInput(StateAt({128, 10}, {0, 0}), EnvConfig{
      .goal = Vec2(0, 128)});
  EXPECT_LT(w.x(), 0.0);
  EXPECT_GT(w.y(), 0.0);
}

TEST(StraightLineStepsTest, ClosedForm) {
  const EnvConfig env = QuietEnv();
  const double expected =
      std::ceil((128.0 * std::sqrt(2.0) - 5.0) / 3.5);
  EXPECT_EQ(StraightLineSteps(env), static_cast<int>(expected));

  EnvState s = StateAt(env.start, {0, 128});
  int steps = 0;
  while (s.status == EnvStatus::kRunning) {
    s = Step(s, NominalInput(s, env), env);
    ++steps;
  }
  EXPECT_EQ(s.status, EnvStatus::kReachedGoal);
  EXPECT_EQ(steps, StraightLineSteps(env));
}

TEST(ResetTest, DeterministicPerSeed) {
  const EnvConfig env;
  const EnvState a = Reset(env, 42);
  const EnvState b = Reset(env, 42);
  EXPECT_EQ(a.obstacle, b.obstacle);
  EXPECT_EQ(a.agent, env.start);
}

TEST(ResetTest, SpawnsVaryAcrossSeedsWithinBand) {
  const EnvConfig env;
  std::set<std::pair<double, double>> spawns;
  const Vec2 diag = (env.goal - env.start).normalized();
  const Vec2 normal(-diag.y(), diag.x());
  const double length = (env.goal - env.start).norm();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const EnvState s = Reset(env, seed);
    spawns.insert({s.obstacle.x(), s.obstacle.y()});
    const Vec2 rel = s.obstacle - env.start;
    const double along = rel.dot(diag) / length;
    EXPECT_GE(along, env.spawn_along_min - 1e-12);
    EXPECT_LE(along, env.spawn_along_max + 1e-12);
    EXPECT_LE(std::abs(rel.dot(normal)), env.spawn_offset + 1e-9);
  }
  EXPECT_EQ(spawns.size(), 20u);
}

TEST(RolloutTest, BitwiseDeterministic) {
  const EnvConfig env;
  auto run = [&] {
    EnvState s = Reset(env, 7);
    std::vector<Vec2> trace;
    for (int k = 0; k < 30 && s.status == EnvStatus::kRunning; ++k) {
      s = Step(s, Vec2(std::sin(k), 1.0), env);
      trace.push_back(s.obstacle);
    }
    return trace;
  };
  EXPECT_EQ(run(), run());
}

TEST(EnvConfigTest, RejectsNonPositive) {
  EnvConfig env;
  env.agent_max_speed = 0.0;
  EXPECT_THROW(env.Validate(), ContractError);
  env = EnvConfig{};
  env.max_steps = 0;
  EXPECT_THROW(env.Validate(), ContractError);
}

}  // namespace
}  // namespace assist
