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

#ifndef ASSIST_MAZE_ENV_H_
#define ASSIST_MAZE_ENV_H_

#include <cstdint>
#include <random>
#include <string_view>

#include <Eigen/Core>

namespace assist {

using Vec2 = Eigen::Vector2d;

// Square world with one agent, one obstacle and a goal. Units are world
// units; the agent starts at `start` and succeeds when it comes within
// `goal_radius` of `goal`.
//
// The obstacle spawns in a band around the start-goal diagonal: at a
// uniform fraction in [spawn_along_min, spawn_along_max] of the way from
// start to goal, shifted perpendicular to the diagonal by a uniform offset
// in [-spawn_offset, spawn_offset]. Each step it moves by
//   bias * speed * unit(agent - obstacle) + noise * speed * N(0, I)
// with the result norm-clamped to `obstacle_speed`.
struct EnvConfig {
  double world_size = 128.0;
  Vec2 start = Vec2(0.0, 0.0);
  Vec2 goal = Vec2(128.0, 128.0);
  double agent_max_speed = 3.5;
  double agent_radius = 4.0;
  double obstacle_radius = 4.0;
  double obstacle_speed = 2.5;
  double obstacle_bias = 0.25;
  double obstacle_noise = 1.0;
  double spawn_along_min = 0.3;
  double spawn_along_max = 0.7;
  double spawn_offset = 24.0;
  double goal_radius = 5.0;
  int max_steps = 200;
  std::uint64_t seed = 0;

  // Throws ContractError when a radius/speed is non-positive etc.
  void Validate() const;
};

enum class EnvStatus { kRunning, kReachedGoal, kDone };

std::string_view ToString(EnvStatus status);

struct EnvState {
  Vec2 agent = Vec2::Zero();
  Vec2 obstacle = Vec2::Zero();
  int t = 0;
  EnvStatus status = EnvStatus::kRunning;
  bool collided_ever = false;
  std::mt19937_64 rng;
};

EnvState Reset(const EnvConfig& config);
EnvState Reset(const EnvConfig& config, std::uint64_t seed);

// Advances one step with velocity command `u` (world units per step).
// Throws ContractError when `state` is not running.
EnvState Step(const EnvState& state, const Vec2& u, const EnvConfig& config);

// Straight-line command toward the goal at full speed; zero inside the
// goal radius.
Vec2 NominalInput(const EnvState& state, const EnvConfig& config);

// Shared geometry helpers.
Vec2 ClampNorm(const Vec2& v, double max_norm);
Vec2 ClipToWorld(const Vec2& p, double world_size);
bool IsColliding(const Vec2& agent, const Vec2& obstacle,
                 const EnvConfig& config);

// Number of steps the nominal policy needs on an unobstructed run.
int StraightLineSteps(const EnvConfig& config);

}  // namespace assist

#endif  // ASSIST_MAZE_ENV_H_
