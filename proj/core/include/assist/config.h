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

#ifndef ASSIST_CONFIG_H_
#define ASSIST_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "assist/data_pipeline.h"
#include "assist/dynamics_model.h"
#include "assist/executor.h"
#include "assist/maze_env.h"
#include "assist/teacher.h"

namespace assist {

struct CollectSettings {
  int n = 150;
};

struct EvalSettings {
  int n_episodes = 50;
  std::vector<Condition> conditions{kAllConditions.begin(),
                                    kAllConditions.end()};
};

struct ServeSettings {
  int port = 8765;
  double tick_rate_hz = 10.0;
  std::string static_dir;  // empty: no static assets
};

// Everything one pipeline run needs. Every key of the JSON form is
// optional; omitted keys keep the defaults below. The top-level seed is
// copied into the env, teacher and model seeds.
//
//   {"seed": 0,
//    "env": {...EnvConfig fields, start/goal as [x, y]...},
//    "teacher": {"danger_radius", "safe_radius", "evasion_blend",
//                "input_noise", "noise_corr"},
//    "collect": {"n"},
//    "pipeline": {"smooth_window", "filter_mask", "augment_sigma",
//                 "augment_copies"},
//    "model": {"hidden_dim", "alpha_s", "alpha_u", "alpha_p", "lr",
//              "batch_size", "epochs"},
//    "optimizer": {"step_size", "iterations", "u_min", "u_max",
//                  "max_window", "abort_enabled", "abort_threshold"},
//    "eval": {"n_episodes", "conditions"},
//    "serve": {"port", "tick_rate_hz", "static_dir"}}
struct RunConfig {
  std::uint64_t seed = 0;
  EnvConfig env;
  TeacherConfig teacher;
  CollectSettings collect;
  PipelineConfig pipeline;
  ModelConfig model;
  ExecutionConfig execution;
  EvalSettings eval;
  ServeSettings serve;

  // Copies `seed` into the per-module seeds and validates every section.
  void Materialize();
};

// Throws ConfigError on malformed JSON, unknown keys or bad values.
RunConfig ParseRunConfig(std::string_view json_text);
RunConfig LoadRunConfig(const std::filesystem::path& path);

// Canonical JSON of the effective configuration (every key present).
std::string RunConfigToJson(const RunConfig& config);

}  // namespace assist

#endif  // ASSIST_CONFIG_H_
