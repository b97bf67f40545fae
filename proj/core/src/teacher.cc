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

#include "assist/teacher.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

#include "assist/errors.h"
#include "assist/seeding.h"

namespace assist {
namespace {

// Distance from `from` along unit `dir` to the boundary of [0, size]^2.
double FreeRun(const Vec2& from, const Vec2& dir, double size) {
  double run = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 2; ++k) {
    if (dir[k] > 0.0) run = std::min(run, (size - from[k]) / dir[k]);
    if (dir[k] < 0.0) run = std::min(run, -from[k] / dir[k]);
  }
  return run;
}

constexpr int kAttemptFloor = 1000;
constexpr double kMinSuccessRate = 0.05;

}  // namespace

void TeacherConfig::Validate() const {
  if (!(danger_radius > 0.0) || !(safe_radius > danger_radius)) {
    throw ContractError("teacher: need 0 < danger_radius < safe_radius");
  }
  if (evasion_blend < 0.0 || evasion_blend > 1.0) {
    throw ContractError("teacher: evasion_blend must be in [0, 1]");
  }
  if (!(input_noise >= 0.0)) {
    throw ContractError("teacher: input_noise must be >= 0");
  }
  if (!(noise_corr >= 0.0 && noise_corr < 1.0)) {
    throw ContractError("teacher: noise_corr must be in [0, 1)");
  }
}

TeachAction TeachInput(const EnvState& state, const Vec2& nominal_u,
                       const TeacherConfig& config, const EnvConfig& env,
                       TeacherState& teacher) {
  const Vec2 to_obstacle = state.obstacle - state.agent;
  const double dist = to_obstacle.norm();
  if (!teacher.active && dist < config.danger_radius) teacher.active = true;
  if (teacher.active && dist > config.safe_radius) teacher.active = false;
  if (!teacher.active) return {nominal_u, 0.0};

  const Vec2 away = dist > 0.0 ? Vec2(to_obstacle / dist) : Vec2(1.0, 0.0);
  Vec2 tangent(-away.y(), away.x());
  const double left = FreeRun(state.agent, tangent, env.world_size);
  const double right = FreeRun(state.agent, -tangent, env.world_size);
  if (right > left) tangent = -tangent;

  const Vec2 to_goal = env.goal - state.agent;
  const Vec2 goal_dir =
      to_goal.norm() > 0.0 ? Vec2(to_goal.normalized()) : Vec2::Zero();
  Vec2 blend = config.evasion_blend * tangent +
               (1.0 - config.evasion_blend) * goal_dir;
  if (blend.norm() == 0.0) blend = tangent;
  return {blend.normalized() * env.agent_max_speed, 1.0};
}

TeacherRun RunTeacherEpisode(const EnvConfig& env, const TeacherConfig& config,
                             std::uint64_t seed) {
  config.Validate();
  TeacherRun run;
  run.episode.meta.seed = seed;
  run.episode.meta.source = EpisodeSource::kScripted;
  EnvState state = Reset(env, seed);
  TeacherState teacher;
  std::mt19937_64 rng(DeriveSeed(seed, kStreamTeacher));
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double innovation = config.input_noise * env.agent_max_speed *
                            std::sqrt(1.0 - config.noise_corr * config.noise_corr);
  Vec2 jitter = Vec2::Zero();
  run.episode.meta.outcome = EpisodeOutcome::kTimedOut;
  if (state.collided_ever) {
    run.episode.meta.outcome = EpisodeOutcome::kCollided;
    run.final_state = state;
    return run;
  }
  while (state.status == EnvStatus::kRunning) {
    const TeachAction action =
        TeachInput(state, NominalInput(state, env), config, env, teacher);
    Vec2 u = action.u;
    if (config.input_noise > 0.0) {
      const double e0 = gauss(rng);
      const double e1 = gauss(rng);
      jitter = config.noise_corr * jitter + innovation * Vec2(e0, e1);
      u = ClampNorm(u + jitter, env.agent_max_speed);
    }
    StepVector step;
    step.s << state.agent, state.obstacle;
    step.u = u;
    step.p = action.p;
    run.episode.steps.push_back(step);
    state = Step(state, u, env);
    if (state.collided_ever) {
      run.episode.meta.outcome = EpisodeOutcome::kCollided;
      break;
    }
    if (state.status == EnvStatus::kReachedGoal) {
      run.episode.meta.outcome = EpisodeOutcome::kReachedGoal;
    }
  }
  run.final_state = state;
  return run;
}

Dataset CollectEpisodes(const EnvConfig& env, const TeacherConfig& config,
                        int n, std::uint64_t seed, CollectionStats* stats) {
  if (n < 1) throw ContractError("collect: n must be >= 1");
  env.Validate();
  config.Validate();

  Dataset dataset;
  dataset.header.env = env;
  const int budget = std::max(kAttemptFloor, 20 * n);
  int attempts = 0;
  std::int64_t total_steps = 0;
  std::int64_t assisted_steps = 0;
  while (static_cast<int>(dataset.episodes.size()) < n) {
    if (attempts >= budget) {
      throw CollectionError(fmt::format(
          "collect: only {} of {} requested episodes after {} attempts",
          dataset.episodes.size(), n, attempts));
    }
    if (attempts == kAttemptFloor &&
        dataset.episodes.size() < kMinSuccessRate * kAttemptFloor) {
      throw CollectionError(fmt::format(
          "collect: success rate {:.1f}% over {} attempts is below 5%",
          100.0 * dataset.episodes.size() / attempts, attempts));
    }
    const std::uint64_t episode_seed = DeriveSeed(seed, kStreamCollect, attempts);
    ++attempts;
    TeacherRun run = RunTeacherEpisode(env, config, episode_seed);
    if (run.episode.meta.outcome != EpisodeOutcome::kReachedGoal ||
        run.final_state.collided_ever) {
      continue;
    }
    run.episode.meta.episode_id = static_cast<int>(dataset.episodes.size());
    for (const StepVector& step : run.episode.steps) {
      ++total_steps;
      if (step.p > 0.5) ++assisted_steps;
    }
    dataset.episodes.push_back(std::move(run.episode));
  }
  if (stats != nullptr) {
    stats->attempts = attempts;
    stats->retained = static_cast<int>(dataset.episodes.size());
    stats->intervention_fraction =
        total_steps > 0 ? static_cast<double>(assisted_steps) / total_steps
                        : 0.0;
  }
  return dataset;
}

}  // namespace assist
