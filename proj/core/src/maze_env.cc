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

#include "assist/errors.h"

namespace assist {

void EnvConfig::Validate() const {
  if (!(world_size > 0.0) || !(agent_max_speed > 0.0) ||
      !(agent_radius > 0.0) || !(obstacle_radius > 0.0) ||
      !(obstacle_speed > 0.0) || !(goal_radius > 0.0)) {
    throw ContractError("env config: sizes, radii and speeds must be positive");
  }
  if (max_steps < 1) throw ContractError("env config: max_steps must be >= 1");
  if (obstacle_bias < 0.0 || obstacle_noise < 0.0 || spawn_offset < 0.0 ||
      spawn_along_min > spawn_along_max) {
    throw ContractError("env config: invalid obstacle parameters");
  }
}

std::string_view ToString(EnvStatus status) {
  switch (status) {
    case EnvStatus::kRunning:
      return "running";
    case EnvStatus::kReachedGoal:
      return "reached_goal";
    case EnvStatus::kDone:
      return "done";
  }
  return "unknown";
}

Vec2 ClampNorm(const Vec2& v, double max_norm) {
  const double n = v.norm();
  if (n > max_norm) return v * (max_norm / n);
  return v;
}

Vec2 ClipToWorld(const Vec2& p, double world_size) {
  return p.cwiseMax(0.0).cwiseMin(world_size);
}

bool IsColliding(const Vec2& agent, const Vec2& obstacle,
                 const EnvConfig& config) {
  return (agent - obstacle).norm() <
         config.agent_radius + config.obstacle_radius;
}

EnvState Reset(const EnvConfig& config) { return Reset(config, config.seed); }

EnvState Reset(const EnvConfig& config, std::uint64_t seed) {
  config.Validate();
  EnvState state;
  state.rng.seed(seed);
  state.agent = config.start;

  std::uniform_real_distribution<double> along(config.spawn_along_min,
                                               config.spawn_along_max);
  std::uniform_real_distribution<double> offset(-config.spawn_offset,
                                                config.spawn_offset);
  const Vec2 diagonal = config.goal - config.start;
  const Vec2 normal = Vec2(-diagonal.y(), diagonal.x()).normalized();
  const double a = along(state.rng);
  const double d = offset(state.rng);
  state.obstacle =
      ClipToWorld(config.start + a * diagonal + d * normal, config.world_size);
  state.collided_ever = IsColliding(state.agent, state.obstacle, config);
  return state;
}

EnvState Step(const EnvState& state, const Vec2& u, const EnvConfig& config) {
  if (state.status != EnvStatus::kRunning) {
    throw ContractError("env: step called on a finished episode");
  }
  EnvState next = state;
  next.agent = ClipToWorld(state.agent + ClampNorm(u, config.agent_max_speed),
                           config.world_size);

  std::normal_distribution<double> gauss(0.0, 1.0);
  const double nx = gauss(next.rng);
  const double ny = gauss(next.rng);
  Vec2 chase = state.agent - state.obstacle;
  const double dist = chase.norm();
  chase = dist > 0.0 ? Vec2(chase / dist) : Vec2::Zero();
  const Vec2 velocity =
      config.obstacle_bias * config.obstacle_speed * chase +
      config.obstacle_noise * config.obstacle_speed * Vec2(nx, ny);
  next.obstacle =
      ClipToWorld(state.obstacle + ClampNorm(velocity, config.obstacle_speed),
                  config.world_size);

  ++next.t;
  if (IsColliding(next.agent, next.obstacle, config)) next.collided_ever = true;
  if ((next.agent - config.goal).norm() < config.goal_radius) {
    next.status = EnvStatus::kReachedGoal;
  } else if (next.t >= config.max_steps) {
    next.status = EnvStatus::kDone;
  }
  return next;
}

Vec2 NominalInput(const EnvState& state, const EnvConfig& config) {
  const Vec2 to_goal = config.goal - state.agent;
  const double dist = to_goal.norm();
  if (dist < config.goal_radius) return Vec2::Zero();
  return to_goal * (config.agent_max_speed / dist);
}

int StraightLineSteps(const EnvConfig& config) {
  const double dist = (config.goal - config.start).norm();
  return static_cast<int>(
      std::ceil((dist - config.goal_radius) / config.agent_max_speed));
}

}  // namespace assist
