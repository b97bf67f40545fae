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

#include "assist/dynamics_model.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "assist/adam.h"
#include "assist/errors.h"
#include "assist/losses.h"
#include "assist/seeding.h"

namespace assist {

void ModelConfig::Validate() const {
  if (input_dim != kStepDim || output_dim != kStepDim) {
    throw ContractError(fmt::format(
        "model config: input/output dims must be {}, got {}/{}", kStepDim,
        input_dim, output_dim));
  }
  if (hidden_dim <= 0) throw ContractError("model config: hidden_dim <= 0");
  if (alpha.s < 0.0 || alpha.u < 0.0 || alpha.p < 0.0 ||
      alpha.s + alpha.u + alpha.p == 0.0) {
    throw ContractError(
        "model config: loss weights must be >= 0 and not all zero");
  }
  if (!(lr > 0.0)) throw ContractError("model config: lr must be positive");
  if (batch_size < 1) throw ContractError("model config: batch_size < 1");
  if (epochs < 0) throw ContractError("model config: epochs < 0");
}

StepVector ApplyHeads(const RealVec& raw) {
  StepVector out = StepVector::Unpack(raw);
  out.p = Sigmoid(raw[kStepDim - 1]);
  return out;
}

Prediction PredictNext(const TrainedModel& model, const RecurrentState& state,
                       const StepVector& x) {
  LstmStepResult step = LstmStep(model.params, x.Pack(), state);
  if (!step.y.allFinite()) {
    throw ModelCorruptionError("predict: model produced a non-finite output");
  }
  return {ApplyHeads(step.y), std::move(step.state)};
}

SequenceLossValue SequenceLoss(std::span<const StepVector> pred,
                               std::span<const StepVector> actual,
                               const LossWeights& alpha) {
  if (pred.size() != actual.size() || pred.empty()) {
    throw ContractError(fmt::format(
        "sequence loss: lengths {} and {} differ or are zero", pred.size(),
        actual.size()));
  }
  const double steps = static_cast<double>(pred.size());
  SequenceLossValue v;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    v.s += Mse(pred[t].s, actual[t].s);
    v.u += Mse(pred[t].u, actual[t].u);
    v.p += Bce(pred[t].p, actual[t].p);
  }
  v.s /= steps;
  v.u /= steps;
  v.p /= steps;
  v.total = alpha.s * v.s + alpha.u * v.u + alpha.p * v.p;
  return v;
}

SequenceLossValue SequenceLossFromRaw(std::span<const RealVec> raw,
                                      std::span<const StepVector> actual,
                                      const LossWeights& alpha,
                                      std::vector<RealVec>* grads) {
  if (raw.size() != actual.size() || raw.empty()) {
    throw ContractError(fmt::format(
        "sequence loss: lengths {} and {} differ or are zero", raw.size(),
        actual.size()));
  }
  const double steps = static_cast<double>(raw.size());
  if (grads != nullptr) grads->resize(raw.size());
  SequenceLossValue v;
  for (std::size_t t = 0; t < raw.size(); ++t) {
    const RealVec& y = raw[t];
    const StepVector& target = actual[t];
    const auto ds = y.head<kStateDim>() - target.s;
    const auto du = y.segment<kControlDim>(kStateDim) - target.u;
    const double logit = y[kStepDim - 1];
    v.s += ds.squaredNorm() / kStateDim;
    v.u += du.squaredNorm() / kControlDim;
    v.p += Bce(Sigmoid(logit), target.p);
    if (grads != nullptr) {
      RealVec& g = (*grads)[t];
      g.resize(kStepDim);
      g.head<kStateDim>() = (alpha.s * 2.0 / (kStateDim * steps)) * ds;
      g.segment<kControlDim>(kStateDim) =
          (alpha.u * 2.0 / (kControlDim * steps)) * du;
      g[kStepDim - 1] = alpha.p * BceGradWrtLogit(logit, target.p) / steps;
    }
  }
  v.s /= steps;
  v.u /= steps;
  v.p /= steps;
  v.total = alpha.s * v.s + alpha.u * v.u + alpha.p * v.p;
  return v;
}

std::vector<TeacherForcedSequence> MakeTeacherForcedSequences(
    const Dataset& normalized) {
  if (normalized.episodes.empty()) {
    throw ContractError("train: dataset has no episodes");
  }
  std::vector<TeacherForcedSequence> out;
  out.reserve(normalized.episodes.size());
  for (const Episode& e : normalized.episodes) {
    if (e.length() < 2) {
      throw ContractError(fmt::format(
          "train: episode {} has {} steps, need at least 2", e.meta.episode_id,
          e.length()));
    }
    TeacherForcedSequence seq;
    seq.inputs.reserve(e.length() - 1);
    seq.targets.reserve(e.length() - 1);
    for (std::size_t t = 0; t + 1 < e.length(); ++t) {
      seq.inputs.push_back(e.steps[t].Pack());
      seq.targets.push_back(e.steps[t + 1]);
    }
    out.push_back(std::move(seq));
  }
  return out;
}

TrainedModel TrainOnSequences(std::span<const TeacherForcedSequence> sequences,
                              const ModelConfig& config,
                              const Normalization& norm,
                              const EpochCallback& on_epoch) {
  config.Validate();
  norm.Validate();
  if (sequences.empty()) throw ContractError("train: no sequences");

  TrainedModel model;
  model.config = config;
  model.norm = norm;
  std::mt19937_64 init_rng(DeriveSeed(config.seed, kStreamInit));
  model.params = LstmParams::Random(config.input_dim, config.hidden_dim,
                                    config.output_dim, init_rng);
  std::mt19937_64 shuffle_rng(DeriveSeed(config.seed, kStreamShuffle));

  const RecurrentState zero = model.InitialState();
  AdamState adam = AdamState::ForSize(model.params.NumParameters());
  LstmParams grads = LstmParams::Zeros(config.input_dim, config.hidden_dim,
                                       config.output_dim);
  std::vector<std::size_t> order(sequences.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<RealVec> dy;
  model.loss_curve.reserve(config.epochs);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), shuffle_rng);
    double epoch_loss = 0.0;
    for (std::size_t first = 0; first < order.size();
         first += config.batch_size) {
      const std::size_t last =
          std::min(order.size(), first + static_cast<std::size_t>(config.batch_size));
      grads.w_ih.setZero();
      grads.w_hh.setZero();
      grads.b.setZero();
      grads.w_out.setZero();
      grads.b_out.setZero();
      for (std::size_t k = first; k < last; ++k) {
        const TeacherForcedSequence& seq = sequences[order[k]];
        const LstmTape tape = LstmForward(model.params, seq.inputs, zero);
        const SequenceLossValue loss =
            SequenceLossFromRaw(tape.outputs, seq.targets, config.alpha, &dy);
        if (!std::isfinite(loss.total)) {
          throw NonFiniteError(
              fmt::format("train: non-finite loss in epoch {}", epoch),
              static_cast<std::size_t>(epoch));
        }
        epoch_loss += loss.total;
        LstmAccumulateParamGrads(model.params, tape, dy, grads);
      }
      RealVec flat = model.params.Flatten();
      const RealVec g = grads.Flatten() / static_cast<double>(last - first);
      AdamUpdate(flat, g, adam, config.lr);
      model.params.Unflatten(flat);
    }
    epoch_loss /= static_cast<double>(sequences.size());
    model.loss_curve.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, epoch_loss);
  }
  return model;
}

TrainedModel Train(const Dataset& normalized, const ModelConfig& config,
                   const Normalization& norm, const EpochCallback& on_epoch) {
  const auto sequences = MakeTeacherForcedSequences(normalized);
  return TrainOnSequences(sequences, config, norm, on_epoch);
}

}  // namespace assist
