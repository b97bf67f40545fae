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

#include "assist/data_pipeline.h"

#include <algorithm>
#include <random>

#include <fmt/format.h>

#include "assist/errors.h"

namespace assist {

Eigen::VectorXd StepVector::Pack() const {
  Eigen::VectorXd x(kStepDim);
  x << s, u, p;
  return x;
}

StepVector StepVector::Unpack(const Eigen::VectorXd& x) {
  if (x.size() != kStepDim) {
    throw ContractError(
        fmt::format("step vector: {} entries, expected {}", x.size(), kStepDim));
  }
  StepVector step;
  step.s = x.head<kStateDim>();
  step.u = x.segment<kControlDim>(kStateDim);
  step.p = x[kStepDim - 1];
  return step;
}

std::string_view ToString(EpisodeSource source) {
  switch (source) {
    case EpisodeSource::kScripted:
      return "scripted";
    case EpisodeSource::kHuman:
      return "human";
    case EpisodeSource::kAugmented:
      return "augmented";
  }
  return "unknown";
}

std::string_view ToString(EpisodeOutcome outcome) {
  switch (outcome) {
    case EpisodeOutcome::kReachedGoal:
      return "reached_goal";
    case EpisodeOutcome::kCollided:
      return "collided";
    case EpisodeOutcome::kTimedOut:
      return "timed_out";
  }
  return "unknown";
}

EpisodeSource ParseEpisodeSource(std::string_view text) {
  if (text == "scripted") return EpisodeSource::kScripted;
  if (text == "human") return EpisodeSource::kHuman;
  if (text == "augmented") return EpisodeSource::kAugmented;
  throw DataError(fmt::format("unknown episode source '{}'", text));
}

EpisodeOutcome ParseEpisodeOutcome(std::string_view text) {
  if (text == "reached_goal") return EpisodeOutcome::kReachedGoal;
  if (text == "collided") return EpisodeOutcome::kCollided;
  if (text == "timed_out") return EpisodeOutcome::kTimedOut;
  throw DataError(fmt::format("unknown episode outcome '{}'", text));
}

Normalization Normalization::FromEnv(const EnvConfig& env) {
  return {env.world_size, env.agent_max_speed};
}

void Normalization::Validate() const {
  if (!(world_size > 0.0) || !(max_speed > 0.0)) {
    throw ContractError("normalization constants must be positive");
  }
}

Eigen::VectorXd FilterAssistedState(const Eigen::VectorXd& s, double p,
                                    std::span<const bool> mask) {
  if (mask.size() != static_cast<std::size_t>(s.size())) {
    throw ContractError(fmt::format("filter: mask has {} entries, state has {}",
                                    mask.size(), s.size()));
  }
  Eigen::VectorXd out = s;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    if (mask[k]) out[k] = s[k] * (1.0 - p);
  }
  return out;
}

std::vector<Eigen::VectorXd> Smooth(std::span<const Eigen::VectorXd> series,
                                    int window) {
  if (series.empty()) throw ContractError("smooth: empty series");
  if (window < 1) throw ContractError("smooth: window must be >= 1");
  std::vector<Eigen::VectorXd> out;
  out.reserve(series.size());
  for (std::size_t t = 0; t < series.size(); ++t) {
    const std::size_t first =
        t + 1 >= static_cast<std::size_t>(window) ? t + 1 - window : 0;
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(series[t].size());
    for (std::size_t k = first; k <= t; ++k) sum += series[k];
    out.push_back(sum / static_cast<double>(t - first + 1));
  }
  return out;
}

Dataset Augment(const Dataset& dataset, double sigma, int copies,
                std::uint64_t seed) {
  if (sigma < 0.0 || copies < 0) {
    throw ContractError("augment: sigma and copies must be non-negative");
  }
  Dataset out = dataset;
  if (copies == 0) return out;
  std::mt19937_64 rng(seed);
  int next_id = 0;
  for (const Episode& e : dataset.episodes) {
    next_id = std::max(next_id, e.meta.episode_id + 1);
  }
  out.episodes.reserve(dataset.episodes.size() * (copies + 1));
  for (const Episode& original : dataset.episodes) {
    for (int c = 0; c < copies; ++c) {
      Episode clone = original;
      clone.meta.episode_id = next_id++;
      clone.meta.source = EpisodeSource::kAugmented;
      std::normal_distribution<double> noise(0.0, sigma);
      for (StepVector& step : clone.steps) {
        step.u.x() += noise(rng);
        step.u.y() += noise(rng);
      }
      out.episodes.push_back(std::move(clone));
    }
  }
  return out;
}

StepVector Normalize(const StepVector& step, const Normalization& norm) {
  StepVector out = step;
  out.s /= norm.world_size;
  out.u /= norm.max_speed;
  return out;
}

StepVector Denormalize(const StepVector& step, const Normalization& norm) {
  StepVector out = step;
  out.s *= norm.world_size;
  out.u *= norm.max_speed;
  return out;
}

Episode Normalize(const Episode& episode, const Normalization& norm) {
  norm.Validate();
  Episode out = episode;
  for (StepVector& step : out.steps) step = Normalize(step, norm);
  return out;
}

Episode Denormalize(const Episode& episode, const Normalization& norm) {
  norm.Validate();
  Episode out = episode;
  for (StepVector& step : out.steps) step = Denormalize(step, norm);
  return out;
}

Dataset PrepareTrainingSet(const Dataset& dataset, const Normalization& norm,
                           const PipelineConfig& config, std::uint64_t seed) {
  if (config.filter_mask.size() != kStateDim) {
    throw ContractError("pipeline: filter mask must have one entry per state");
  }
  // std::vector<bool> has no contiguous storage; copy for the span API.
  bool mask[kStateDim];
  std::copy(config.filter_mask.begin(), config.filter_mask.end(), mask);
  const bool any_filter = std::any_of(std::begin(mask), std::end(mask),
                                      [](bool m) { return m; });

  Dataset prepared;
  prepared.header = dataset.header;
  prepared.episodes.reserve(dataset.episodes.size());
  for (const Episode& raw : dataset.episodes) {
    Episode e = Normalize(raw, norm);
    if (any_filter) {
      for (StepVector& step : e.steps) {
        step.s = FilterAssistedState(step.s, step.p, mask);
      }
    }
    if (config.smooth_window > 1 && !e.steps.empty()) {
      std::vector<Eigen::VectorXd> states;
      states.reserve(e.steps.size());
      for (const StepVector& step : e.steps) states.emplace_back(step.s);
      const auto smoothed = Smooth(states, config.smooth_window);
      for (std::size_t t = 0; t < e.steps.size(); ++t) {
        e.steps[t].s = smoothed[t];
      }
    }
    prepared.episodes.push_back(std::move(e));
  }
  return Augment(prepared, config.augment_sigma, config.augment_copies, seed);
}

}  // namespace assist
