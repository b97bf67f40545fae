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

#ifndef ASSIST_DATA_PIPELINE_H_
#define ASSIST_DATA_PIPELINE_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "assist/maze_env.h"

namespace assist {

inline constexpr int kStateDim = 4;
inline constexpr int kControlDim = 2;
inline constexpr int kStepDim = kStateDim + kControlDim + 1;

// One timestep x = (s, u, p).
//   s: agent x, agent y, obstacle x, obstacle y
//   u: velocity command
//   p: assistance rate in [0, 1]
struct StepVector {
  Eigen::Vector4d s = Eigen::Vector4d::Zero();
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  double p = 0.0;

  // Packs as [s, u, p].
  Eigen::VectorXd Pack() const;
  static StepVector Unpack(const Eigen::VectorXd& x);

  bool operator==(const StepVector& other) const = default;
};

enum class EpisodeSource { kScripted, kHuman, kAugmented };
enum class EpisodeOutcome { kReachedGoal, kCollided, kTimedOut };

std::string_view ToString(EpisodeSource source);
std::string_view ToString(EpisodeOutcome outcome);
EpisodeSource ParseEpisodeSource(std::string_view text);
EpisodeOutcome ParseEpisodeOutcome(std::string_view text);

struct EpisodeMeta {
  int episode_id = 0;
  std::uint64_t seed = 0;
  EpisodeSource source = EpisodeSource::kScripted;
  EpisodeOutcome outcome = EpisodeOutcome::kReachedGoal;

  bool operator==(const EpisodeMeta& other) const = default;
};

struct Episode {
  EpisodeMeta meta;
  std::vector<StepVector> steps;

  std::size_t length() const { return steps.size(); }
  bool operator==(const Episode& other) const = default;
};

struct DatasetHeader {
  int format_version = 1;
  EnvConfig env;
  // ISO-8601 timestamp. Defaults to the epoch so files are reproducible.
  std::string created_at = "1970-01-01T00:00:00Z";
  // Effective run configuration (JSON text) that produced the dataset.
  std::string run_config;
};

struct Dataset {
  DatasetHeader header;
  std::vector<Episode> episodes;
};

// Scale constants mapping world units into the model's input range.
struct Normalization {
  double world_size = 128.0;
  double max_speed = 3.5;

  static Normalization FromEnv(const EnvConfig& env);
  void Validate() const;
  bool operator==(const Normalization& other) const = default;
};

// s * (1 - p) on the masked components; others pass through.
Eigen::VectorXd FilterAssistedState(const Eigen::VectorXd& s, double p,
                                    std::span<const bool> mask);

// Causal moving average: out[t] = mean(series[max(0, t - window + 1) .. t]).
std::vector<Eigen::VectorXd> Smooth(std::span<const Eigen::VectorXd> series,
                                    int window = 3);

// Appends `copies` clones of every episode with N(0, sigma^2) noise added
// to u. Originals keep their order and come first.
Dataset Augment(const Dataset& dataset, double sigma, int copies,
                std::uint64_t seed);

StepVector Normalize(const StepVector& step, const Normalization& norm);
StepVector Denormalize(const StepVector& step, const Normalization& norm);
Episode Normalize(const Episode& episode, const Normalization& norm);
Episode Denormalize(const Episode& episode, const Normalization& norm);

// Preprocessing applied to a world-unit dataset before training.
struct PipelineConfig {
  int smooth_window = 1;                      // 1 disables smoothing
  std::vector<bool> filter_mask = std::vector<bool>(kStateDim, false);
  double augment_sigma = 0.02;                // normalized units
  int augment_copies = 0;
};

// Normalizes, filters, smooths s, then augments u. Output is in
// normalized units.
Dataset PrepareTrainingSet(const Dataset& dataset, const Normalization& norm,
                           const PipelineConfig& config, std::uint64_t seed);

}  // namespace assist

#endif  // ASSIST_DATA_PIPELINE_H_
