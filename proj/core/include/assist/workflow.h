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

// End-to-end stages shared by the command-line tool and the acceptance
// suite, so both run exactly the same pipeline for a given RunConfig.

#ifndef ASSIST_WORKFLOW_H_
#define ASSIST_WORKFLOW_H_

#include "assist/config.h"
#include "assist/dynamics_model.h"
#include "assist/executor.h"
#include "assist/teacher.h"

namespace assist {

// Scripted-teacher collection of `config.collect.n` episodes. The header
// carries the environment and the effective run config.
Dataset CollectStage(const RunConfig& config, CollectionStats* stats = nullptr);

// Normalize, filter, smooth and augment `raw` (world units), then train.
TrainedModel TrainStage(const Dataset& raw, const RunConfig& config,
                        const EpochCallback& on_epoch = {});

// Paired evaluation of every configured condition.
MetricsTable EvaluateStage(const TrainedModel& model, const RunConfig& config);

}  // namespace assist

#endif  // ASSIST_WORKFLOW_H_
