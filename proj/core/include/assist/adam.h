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

#ifndef ASSIST_ADAM_H_
#define ASSIST_ADAM_H_

#include <cstdint>

#include <Eigen/Core>

namespace assist {

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::int64_t step_count = 0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;

  static AdamState ForSize(Eigen::Index n);
};

inline constexpr double kDefaultLearningRate = 1e-3;

// Bias-corrected Adam step applied in place to `params`.
void AdamUpdate(Eigen::VectorXd& params, const Eigen::VectorXd& grads,
                AdamState& state, double lr = kDefaultLearningRate);

}  // namespace assist

#endif  // ASSIST_ADAM_H_
