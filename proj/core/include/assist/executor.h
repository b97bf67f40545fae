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

#ifndef ASSIST_EXECUTOR_H_
#define ASSIST_EXECUTOR_H_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "assist/dynamics_model.h"
#include "assist/maze_env.h"
#include "assist/trajectory_optimizer.h"

namespace assist {

struct ExecutionConfig {
  OptConfig opt;
  bool abort_enabled = false;
  double abort_threshold = 0.8;
};

enum class ExecStatus { kReachedGoal, kTimedOut, kAborted };
std::string_view ToString(ExecStatus status);

struct ExecStep {
  int t = 0;                     // 1-based control step
  Eigen::Vector4d s;             // world units, observed before acting
  Eigen::Vector2d u_executed;    // world units
  double p_predicted = 0.0;
  double loss_final = 0.0;
  Condition condition = Condition::kNoBP;

  bool operator==(const ExecStep& other) const = default;
};

struct ExecutionRecord {
  std::vector<ExecStep> steps;
  ExecStatus status = ExecStatus::kTimedOut;
  bool collided_ever = false;
  int env_steps = 0;
  std::uint64_t seed = 0;

  bool operator==(const ExecutionRecord& other) const = default;
};

// Closed loop: observe s_t, optimize u from the previous command, execute
// it, then feed the executed (s_t, u_t, p_t) into the model's recurrent
// state. With abort enabled the episode stops as soon as the predicted
// assistance rate reaches the threshold (after executing that step).
ExecutionRecord RunEpisode(const TrainedModel& model, const EnvConfig& env,
                           const ExecutionConfig& config, std::uint64_t seed);

struct ConditionMetrics {
  Condition condition = Condition::kNoBP;
  int n_episodes = 0;
  int reached = 0;
  int avoided = 0;
  double reach_rate = 0.0;
  double avoid_rate = 0.0;
  double avg_steps = 0.0;         // over reaching episodes only
  double avg_steps_capped = 0.0;  // non-reaching counted as max_steps

  bool operator==(const ConditionMetrics& other) const = default;
};

struct MetricsTable {
  std::vector<ConditionMetrics> rows;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> episode_seeds;  // shared by every condition

  const ConditionMetrics& Row(Condition condition) const;
  bool operator==(const MetricsTable& other) const = default;
};

inline constexpr std::array<Condition, 4> kAllConditions = {
    Condition::kNoBP, Condition::kBPu, Condition::kBPp, Condition::kBPuP};

// Episode i of every condition uses the same environment seed.
MetricsTable Evaluate(const TrainedModel& model, const EnvConfig& env,
                      const ExecutionConfig& base,
                      std::span<const Condition> conditions, int n_episodes,
                      std::uint64_t seed);

// Reference numbers reported for the path-planning task, in table order.
struct ReferenceRow {
  Condition condition;
  double reach_rate;
  double avoid_rate;
  double avg_steps;
};
inline constexpr std::array<ReferenceRow, 4> kReferenceTable = {{
    {Condition::kNoBP, 0.88, 0.55, 54.0},
    {Condition::kBPu, 1.00, 0.62, 48.0},
    {Condition::kBPp, 0.76, 0.50, 147.0},
    {Condition::kBPuP, 0.98, 0.90, 74.0},
}};

struct OrdinalCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The ordinal pattern of the reference table:
//   a1  avoid(BPuP) >= avoid(NoBP) + 0.15
//   a2  avoid(BPuP) >= avoid(BPu) + 0.10
//   b   reach(BPu) >= 0.95
//   c   avg_steps(BPp) >= 1.3 * avg_steps(BPu)
//   d   reach(BPuP) >= reach(BPp)
// Requires all four conditions in the table.
std::vector<OrdinalCheck> CheckOrdinals(const MetricsTable& table);

std::string MetricsToCsv(const MetricsTable& table);

// JSON report: measured rows next to the reference table, ordinal checks,
// paired seeds and the effective run config.
std::string MetricsToJson(const MetricsTable& table,
                          std::span<const OrdinalCheck> checks,
                          std::string_view run_config_json);

}  // namespace assist

#endif  // ASSIST_EXECUTOR_H_
