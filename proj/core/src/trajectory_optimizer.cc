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

#include "assist/trajectory_optimizer.h"

#include <cmath>

#include <fmt/format.h>

#include "assist/errors.h"
#include "assist/losses.h"

namespace assist {

std::string_view ToString(Condition condition) {
  switch (condition) {
    case Condition::kNoBP:
      return "nobp";
    case Condition::kBPu:
      return "bpu";
    case Condition::kBPp:
      return "bpp";
    case Condition::kBPuP:
      return "bpup";
  }
  return "unknown";
}

Condition ParseCondition(std::string_view text) {
  if (text == "nobp") return Condition::kNoBP;
  if (text == "bpu") return Condition::kBPu;
  if (text == "bpp") return Condition::kBPp;
  if (text == "bpup") return Condition::kBPuP;
  throw ContractError(fmt::format("unknown condition '{}'", text));
}

OptConfig OptConfig::ForCondition(const OptConfig& base, Condition condition) {
  OptConfig config = base;
  config.condition = condition;
  switch (condition) {
    case Condition::kNoBP:
      config.beta = {0.0, 0.0, 0.0};
      break;
    case Condition::kBPu:
      config.beta = {0.0, 1.0, 0.0};
      break;
    case Condition::kBPp:
      config.beta = {0.0, 0.0, 1.0};
      break;
    case Condition::kBPuP:
      config.beta = {0.0, 1.0, 1.0};
      break;
  }
  return config;
}

void OptConfig::Validate() const {
  if (!(step_size > 0.0)) throw ContractError("opt config: step_size <= 0");
  if (iterations < 0) throw ContractError("opt config: iterations < 0");
  if (max_window < 0) throw ContractError("opt config: max_window < 0");
  if (!(u_min.array() < u_max.array()).all()) {
    throw ContractError("opt config: need u_min < u_max componentwise");
  }
  if (beta.s < 0.0 || beta.u < 0.0 || beta.p < 0.0) {
    throw ContractError("opt config: loss weights must be >= 0");
  }
}

PredictionWindow::PredictionWindow(int max_window)
    : capacity_(static_cast<std::size_t>(max_window) + 1) {}

void PredictionWindow::Push(RealVec raw) {
  entries_.push_back(std::move(raw));
  while (entries_.size() > capacity_) entries_.pop_front();
}

double WindowLoss(const PredictionWindow& window, const References& refs,
                  const LossWeights& beta, RealVec* newest_grad) {
  if (window.empty()) throw ContractError("window loss: empty window");
  if (beta.s > 0.0 && !refs.s_ref) {
    throw ContractError("window loss: beta_s > 0 but no state reference");
  }
  if (beta.u > 0.0 && !refs.u_ref) {
    throw ContractError("window loss: beta_u > 0 but no control reference");
  }
  const double n = static_cast<double>(window.size());
  double loss_s = 0.0, loss_u = 0.0, loss_p = 0.0;
  for (const RealVec& raw : window.entries()) {
    if (refs.s_ref) loss_s += Mse(raw.head<kStateDim>(), *refs.s_ref);
    if (refs.u_ref) {
      loss_u += Mse(raw.segment<kControlDim>(kStateDim), *refs.u_ref);
    }
    loss_p += BceFromLogit(raw[kStepDim - 1], refs.p_ref);
  }
  if (newest_grad != nullptr) {
    const RealVec& raw = window.newest();
    newest_grad->setZero(kStepDim);
    if (beta.s > 0.0) {
      newest_grad->head<kStateDim>() =
          beta.s / n * MseGrad(raw.head<kStateDim>(), *refs.s_ref);
    }
    if (beta.u > 0.0) {
      newest_grad->segment<kControlDim>(kStateDim) =
          beta.u / n *
          MseGrad(raw.segment<kControlDim>(kStateDim), *refs.u_ref);
    }
    (*newest_grad)[kStepDim - 1] =
        beta.p / n * (Sigmoid(raw[kStepDim - 1]) - refs.p_ref);
  }
  return (beta.s * loss_s + beta.u * loss_u + beta.p * loss_p) / n;
}

OptimizeResult OptimizeInput(const TrainedModel& model,
                             const RecurrentState& snapshot,
                             const Eigen::Vector4d& s_t,
                             const Eigen::Vector2d& u_init, double p_init,
                             const References& refs, const OptConfig& config) {
  config.Validate();
  OptimizeResult result;
  result.u = u_init;
  result.p_pred = p_init;

  StepVector x;
  x.s = s_t;
  x.u = u_init;
  x.p = p_init;
  PredictionWindow window(config.max_window);

  if (config.condition == Condition::kNoBP || config.iterations == 0) {
    const Prediction pred = PredictNext(model, snapshot, x);
    result.u = pred.next.u.cwiseMax(config.u_min).cwiseMin(config.u_max);
    result.p_pred = pred.next.p;
    return result;
  }

  RealVec dy;
  for (int tau = 1; tau <= config.iterations; ++tau) {
    const RealVec input = x.Pack();
    const LstmTape tape =
        LstmForward(model.params, std::span<const RealVec>(&input, 1), snapshot);
    window.Push(tape.outputs[0]);
    const double loss = WindowLoss(window, refs, config.beta, &dy);
    if (!std::isfinite(loss) || !dy.allFinite()) {
      result.u = u_init;
      result.aborted = true;
      return result;
    }
    if (tau == 1) result.first_loss = loss;
    result.final_loss = loss;
    result.p_pred = Sigmoid(tape.outputs[0][kStepDim - 1]);

    const LstmGradients grads =
        LstmBackward(model.params, tape, std::span<const RealVec>(&dy, 1));
    const Eigen::Vector2d g = grads.inputs[0].segment<kControlDim>(kStateDim);
    const double g_norm = g.norm();
    if (g_norm == 0.0) continue;
    x.u -= config.step_size * g / g_norm;
    x.u = x.u.cwiseMax(config.u_min).cwiseMin(config.u_max);
    ++result.updates;
  }
  result.u = x.u;
  return result;
}

References MakeReferences(const EnvState& state, const EnvConfig& env) {
  References refs;
  const Vec2 to_goal = env.goal - state.agent;
  const double dist = to_goal.norm();
  refs.u_ref = dist < env.goal_radius ? Eigen::Vector2d::Zero()
                                      : Eigen::Vector2d(to_goal / dist);
  refs.p_ref = 0.0;
  return refs;
}

}  // namespace assist
