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

#ifndef ASSIST_TRAJECTORY_OPTIMIZER_H_
#define ASSIST_TRAJECTORY_OPTIMIZER_H_

#include <deque>
#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "assist/dynamics_model.h"
#include "assist/maze_env.h"

namespace assist {

// Which error terms are backpropagated into the control input.
enum class Condition { kNoBP, kBPu, kBPp, kBPuP };

std::string_view ToString(Condition condition);
Condition ParseCondition(std::string_view text);  // nobp, bpu, bpp, bpup

// Constant targets for the predicted next step, normalized units.
struct References {
  std::optional<Eigen::Vector4d> s_ref;
  std::optional<Eigen::Vector2d> u_ref;
  double p_ref = 0.0;
};

struct OptConfig {
  LossWeights beta{0.0, 1.0, 1.0};
  double step_size = 0.05;  // epsilon, normalized control units
  int iterations = 5;
  Eigen::Vector2d u_min = Eigen::Vector2d(-1.0, -1.0);
  Eigen::Vector2d u_max = Eigen::Vector2d(1.0, 1.0);
  int max_window = 3;  // delta cap
  Condition condition = Condition::kBPuP;

  // Copy of `base` with the condition and its default loss weights:
  // BPu (0, 1, 0), BPp (0, 0, 1), BPuP (0, 1, 1), NoBP (0, 0, 0).
  static OptConfig ForCondition(const OptConfig& base, Condition condition);
  void Validate() const;
};

// Raw head outputs of the most recent predictions inside one optimization
// call, newest last. Holds at most max_window + 1 entries, so iteration tau
// sees min(tau - 1, max_window) older predictions.
class PredictionWindow {
 public:
  explicit PredictionWindow(int max_window);

  void Push(RealVec raw);
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const RealVec& newest() const { return entries_.back(); }
  const std::deque<RealVec>& entries() const { return entries_; }

 private:
  std::size_t capacity_;
  std::deque<RealVec> entries_;
};

// beta_s * mean MSE(s, s_ref) + beta_u * mean MSE(u, u_ref)
//   + beta_p * mean BCE(p, p_ref), means over the window. When
// `newest_grad` is non-null it receives dL/d(raw newest output); older
// entries are treated as constants.
double WindowLoss(const PredictionWindow& window, const References& refs,
                  const LossWeights& beta, RealVec* newest_grad = nullptr);

struct OptimizeResult {
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  double p_pred = 0.0;
  double first_loss = 0.0;
  double final_loss = 0.0;
  int updates = 0;
  bool aborted = false;  // non-finite loss; u is u_init
};

// Gradient descent on the control input through the trained model. Each
// iteration predicts x_{tau+1} from (s_t, u, p_init) on a copy of
// `snapshot`, then steps u by -step_size * g / |g| and clamps it.
// NoBP runs no iterations and returns the model's own predicted u.
OptimizeResult OptimizeInput(const TrainedModel& model,
                             const RecurrentState& snapshot,
                             const Eigen::Vector4d& s_t,
                             const Eigen::Vector2d& u_init, double p_init,
                             const References& refs, const OptConfig& config);

// u_ref is the unit goal direction (full speed in normalized units), no
// s_ref, p_ref = 0.
References MakeReferences(const EnvState& state, const EnvConfig& env);

}  // namespace assist

#endif  // ASSIST_TRAJECTORY_OPTIMIZER_H_
