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

#ifndef ASSIST_DYNAMICS_MODEL_H_
#define ASSIST_DYNAMICS_MODEL_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "assist/data_pipeline.h"
#include "assist/lstm.h"

namespace assist {

// Weights of the three prediction terms in the training loss.
struct LossWeights {
  double s = 1.0;
  double u = 1.0;
  double p = 1.0;
};

struct ModelConfig {
  int input_dim = kStepDim;
  int hidden_dim = 32;
  int output_dim = kStepDim;
  LossWeights alpha;
  double lr = 1e-3;
  int batch_size = 4;
  int epochs = 2000;
  std::uint64_t seed = 0;

  void Validate() const;
};

// Autoregressive model over x = (s, u, p). The s and u heads are linear;
// p goes through a logistic sigmoid.
struct TrainedModel {
  LstmParams params;
  Normalization norm;
  ModelConfig config;
  std::vector<double> loss_curve;  // one entry per epoch
  std::string run_config;          // effective run config (JSON text)

  RecurrentState InitialState() const {
    return RecurrentState::Zeros(params.hidden_dim);
  }
};

// Maps a raw head output to (s, u, sigmoid(p)).
StepVector ApplyHeads(const RealVec& raw);

struct Prediction {
  StepVector next;
  RecurrentState state;
};

// One-step prediction x_{t+1} from the history carried in `state` plus the
// new input `x` (normalized units). Throws ModelCorruptionError on a
// non-finite output.
Prediction PredictNext(const TrainedModel& model, const RecurrentState& state,
                       const StepVector& x);

struct SequenceLossValue {
  double total = 0.0;
  double s = 0.0;
  double u = 0.0;
  double p = 0.0;
};

// MSE over s and u, BCE over p, each averaged over time; combined with
// `alpha`. `pred` holds head-activated predictions.
SequenceLossValue SequenceLoss(std::span<const StepVector> pred,
                               std::span<const StepVector> actual,
                               const LossWeights& alpha);

// Same loss evaluated from raw head outputs. When `grads` is non-null it
// receives dL/dy for every step, ready for LstmBackward.
SequenceLossValue SequenceLossFromRaw(std::span<const RealVec> raw,
                                      std::span<const StepVector> actual,
                                      const LossWeights& alpha,
                                      std::vector<RealVec>* grads);

// Teacher-forced training pair: inputs x_{1:T-1}, targets x_{2:T}.
struct TeacherForcedSequence {
  std::vector<RealVec> inputs;
  std::vector<StepVector> targets;
};

// Throws ContractError on an empty dataset or an episode shorter than 2.
std::vector<TeacherForcedSequence> MakeTeacherForcedSequences(
    const Dataset& normalized);

using EpochCallback = std::function<void(int epoch, double loss)>;

// Adam on per-batch mean gradients; episodes are reshuffled every epoch
// from `config.seed`. Deterministic for a fixed seed.
TrainedModel TrainOnSequences(std::span<const TeacherForcedSequence> sequences,
                              const ModelConfig& config,
                              const Normalization& norm,
                              const EpochCallback& on_epoch = {});

// `normalized` must already be in model units (see PrepareTrainingSet).
TrainedModel Train(const Dataset& normalized, const ModelConfig& config,
                   const Normalization& norm,
                   const EpochCallback& on_epoch = {});

}  // namespace assist

#endif  // ASSIST_DYNAMICS_MODEL_H_
