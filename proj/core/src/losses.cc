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

#include "assist/losses.h"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "assist/errors.h"

namespace assist {
namespace {

void CheckShapes(const VecRef& pred, const VecRef& target) {
  if (pred.size() != target.size() || pred.size() == 0) {
    throw ContractError(fmt::format("mse: shapes {} and {} differ or are empty",
                                    pred.size(), target.size()));
  }
}

}  // namespace

double Mse(const VecRef& pred, const VecRef& target) {
  CheckShapes(pred, target);
  return (pred - target).squaredNorm() / static_cast<double>(pred.size());
}

Eigen::VectorXd MseGrad(const VecRef& pred, const VecRef& target) {
  CheckShapes(pred, target);
  return (2.0 / static_cast<double>(pred.size())) * (pred - target);
}

double Bce(double pred, double target) {
  const double q = std::clamp(pred, kBceClamp, 1.0 - kBceClamp);
  return -(target * std::log(q) + (1.0 - target) * std::log(1.0 - q));
}

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

double BceGradWrtLogit(double logit, double target) {
  const double q = Sigmoid(logit);
  if (q < kBceClamp || q > 1.0 - kBceClamp) return 0.0;
  return q - target;
}

double BceFromLogit(double logit, double target) {
  // softplus(z) = max(z, 0) + log1p(exp(-|z|)) stays finite for any z.
  const double softplus =
      std::max(logit, 0.0) + std::log1p(std::exp(-std::abs(logit)));
  return softplus - target * logit;
}

}  // namespace assist
