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

#ifndef ASSIST_TEACHER_H_
#define ASSIST_TEACHER_H_

#include <cstdint>

#include "assist/data_pipeline.h"
#include "assist/maze_env.h"

namespace assist {

// Scripted stand-in for a human who interrupts the nominal straight-line
// run when the obstacle gets close. Intervention switches on below
// `danger_radius` and off above `safe_radius`.
//
// During collection the executed command carries a slowly varying AR(1)
// perturbation with stationary std `input_noise` (fraction of max speed per
// component) and lag-one correlation `noise_corr`. Zero noise replays
// TeachInput exactly.
struct TeacherConfig {
  double danger_radius = 30.0;
  double safe_radius = 40.0;
  double evasion_blend = 0.7;
  double input_noise = 0.5;
  double noise_corr = 0.8;
  std::uint64_t seed = 0;

  void Validate() const;
};

struct TeacherState {
  bool active = false;
};

struct TeachAction {
  Vec2 u = Vec2::Zero();
  double p = 0.0;
};

// While active the command is
//   normalize(w * tangent + (1 - w) * goal_dir) * max_speed
// where tangent is perpendicular to agent->obstacle and points to the side
// with the longer free run before the world boundary.
TeachAction TeachInput(const EnvState& state, const Vec2& nominal_u,
                       const TeacherConfig& config, const EnvConfig& env,
                       TeacherState& teacher);

struct TeacherRun {
  Episode episode;  // world units; outcome filled in
  EnvState final_state;
};

// One scripted game. Stops at the first collision (the game fails).
TeacherRun RunTeacherEpisode(const EnvConfig& env, const TeacherConfig& config,
                             std::uint64_t seed);

struct CollectionStats {
  int attempts = 0;
  int retained = 0;
  double intervention_fraction = 0.0;
};

// Plays games until `n` successful ones are kept. Throws CollectionError
// when fewer than 5% of the first 1000 attempts succeed, or when the
// attempt budget max(1000, 20 n) runs out.
Dataset CollectEpisodes(const EnvConfig& env, const TeacherConfig& config,
                        int n, std::uint64_t seed,
                        CollectionStats* stats = nullptr);

}  // namespace assist

#endif  // ASSIST_TEACHER_H_
