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

#include "assist/workflow.h"

#include "assist/seeding.h"

namespace assist {

Dataset CollectStage(const RunConfig& config, CollectionStats* stats) {
  Dataset dataset = CollectEpisodes(config.env, config.teacher,
                                    config.collect.n, config.seed, stats);
  dataset.header.run_config = RunConfigToJson(config);
  return dataset;
}

TrainedModel TrainStage(const Dataset& raw, const RunConfig& config,
                        const EpochCallback& on_epoch) {
  const Normalization norm = Normalization::FromEnv(raw.header.env);
  const Dataset prepared = PrepareTrainingSet(
      raw, norm, config.pipeline, DeriveSeed(config.seed, kStreamAugment));
  TrainedModel model = Train(prepared, config.model, norm, on_epoch);
  model.run_config = RunConfigToJson(config);
  return model;
}

MetricsTable EvaluateStage(const TrainedModel& model, const RunConfig& config) {
  return Evaluate(model, config.env, config.execution, config.eval.conditions,
                  config.eval.n_episodes, config.seed);
}

}  // namespace assist
