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

#include "assist/adam.h"

#include <cmath>

#include <fmt/format.h>

#include "assist/errors.h"

namespace assist {

AdamState AdamState::ForSize(Eigen::Index n) {
  AdamState state;
  state.m = Eigen::VectorXd::Zero(n);
  state.v = Eigen::VectorXd::Zero(n);
  return state;
}

void AdamUpdate(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
                AdamState& state, double lr) {
  if (params.size() != grads.size() || state.m.size() != params.size() ||
      state.v.size() != params.size()) {
    throw ContractError(fmt::format(
        "adam: params {}, grads {}, moments {}/{} must have equal size",
        params.size(), grads.size(), state.m.size(), state.v.size()));
  }
  if (!(lr > 0.0)) throw ContractError("adam: learning rate must be positive");

  ++state.step_count;
  const double t = static_cast<double>(state.step_count);
  const double correction1 = 1.0 - std::pow(state.beta1, t);
  const double correction2 = 1.0 - std::pow(state.beta2, t);
  for (Eigen::Index k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    state.m[k] = state.beta1 * state.m[k] + (1.0 - state.beta1) * g;
    state.v[k] = state.beta2 * state.v[k] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[k] / correction1;
    const double v_hat = state.v[k] / correction2;
    params[k] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
  }
}

}  // namespace assist
