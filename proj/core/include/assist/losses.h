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

#ifndef ASSIST_LOSSES_H_
#define ASSIST_LOSSES_H_

#include <Eigen/Core>

namespace assist {

// Probabilities are clamped to [kBceClamp, 1 - kBceClamp] before the log.
inline constexpr double kBceClamp = 1e-7;

using VecRef = Eigen::Ref<const Eigen::VectorXd>;

// Mean over all elements of (pred - target)^2. Throws ContractError on a
// shape mismatch or empty input.
double Mse(const VecRef& pred, const VecRef& target);

// dMse/dpred.
Eigen::VectorXd MseGrad(const VecRef& pred, const VecRef& target);

// -[t ln q + (1 - t) ln(1 - q)] with q = clamp(pred).
double Bce(double pred, double target);

double Sigmoid(double z);

// d Bce(Sigmoid(logit), target) / d logit. Zero where the clamp is active.
double BceGradWrtLogit(double logit, double target);

// Bce(Sigmoid(logit), target) evaluated in logit space without clamping:
// softplus(logit) - target * logit. Its derivative is
// Sigmoid(logit) - target everywhere.
double BceFromLogit(double logit, double target);

}  // namespace assist

#endif  // ASSIST_LOSSES_H_
