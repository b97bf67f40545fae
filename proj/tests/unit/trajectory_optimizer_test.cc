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
#include <random>

#include <gtest/gtest.h>

#include "assist/errors.h"
#include "assist/losses.h"
#include "test_util.h"

namespace assist {
namespace {

RealVec Raw(const Eigen::Vector4d& s, const Eigen::Vector2d& u, double logit) {
  RealVec raw(kStepDim);
  raw << s, u, logit;
  return raw;
}

OptConfig Config(Condition condition, int iterations = 5) {
  OptConfig config = OptConfig::ForCondition(OptConfig{}, condition);
  config.iterations = iterations;
  return config;
}

// One hidden unit whose cell input depends on u only through 3 u0 + 4 u1,
// so every gradient with respect to u is parallel to (3, 4).
TrainedModel ParallelGradientModel() {
  TrainedModel model;
  model.params = LstmParams::Zeros(kStepDim, 1, kStepDim);
  model.params.w_ih(2, 4) = 0.3;  // g gate, u0
  model.params.w_ih(2, 5) = 0.4;  // g gate, u1
  model.params.b[0] = 10.0;       // input gate open
  model.params.b[3] = 10.0;       // output gate open
  model.params.w_out(4, 0) = 1.0;
  model.params.w_out(5, 0) = 1.0;
  model.params.b_out[6] = -3.0;
  model.config.hidden_dim = 1;
  return model;
}

TEST(WindowLossTest, MatchingPredictionHasNearZeroLoss) {
  PredictionWindow window(3);
  const Eigen::Vector2d u_ref(0.6, 0.8);
  window.Push(Raw(Eigen::Vector4d::Zero(), u_ref, -16.0));
  References refs;
  refs.u_ref = u_ref;
  EXPECT_LT(WindowLoss(window, refs, {0, 1, 1}), 1e-6);
}

TEST(WindowLossTest, ControlErrorExample) {
  PredictionWindow window(3);
  References refs;
  refs.u_ref = Eigen::Vector2d(0.5, -0.5);
  window.Push(Raw(Eigen::Vector4d::Zero(), *refs.u_ref + Eigen::Vector2d(0.1, 0),
                  0.0));
  EXPECT_NEAR(WindowLoss(window, refs, {0, 1, 0}), 0.005, 1e-15);
}

TEST(WindowLossTest, LinearInBeta) {
  std::mt19937_64 rng(2);
  PredictionWindow window(3);
  for (int k = 0; k < 4; ++k) window.Push(testing::RandomVector(kStepDim, rng));
  References refs;
  refs.s_ref = Eigen::Vector4d(0.1, 0.2, 0.3, 0.4);
  refs.u_ref = Eigen::Vector2d(0.7, 0.7);
  const LossWeights beta{0.3, 1.7, 0.9};
  const double base = WindowLoss(window, refs, beta);
  for (double k : {2.0, 0.5, 4.0}) {
    EXPECT_EQ(WindowLoss(window, refs, {k * beta.s, k * beta.u, k * beta.p}),
              k * base);
  }
  const double sum = WindowLoss(window, refs, {beta.s, 0, 0}) +
                     WindowLoss(window, refs, {0, beta.u, 0}) +
                     WindowLoss(window, refs, {0, 0, beta.p});
  EXPECT_DOUBLE_EQ(sum, base);
}

TEST(WindowLossTest, GradientFlowsThroughNewestOnly) {
  std::mt19937_64 rng(3);
  PredictionWindow window(3);
  for (int k = 0; k < 3; ++k) window.Push(testing::RandomVector(kStepDim, rng));
  References refs;
  refs.u_ref = Eigen::Vector2d(0.7, 0.7);
  const LossWeights beta{0, 1.0, 0.5};
  RealVec grad;
  WindowLoss(window, refs, beta, &grad);
  // Oracle: rebuild the window with a perturbed newest entry.
  for (int k = 0; k < kStepDim; ++k) {
    auto loss_with = [&](double delta) {
      PredictionWindow w(3);
      for (std::size_t i = 0; i < window.size(); ++i) {
        RealVec e = window.entries()[i];
        if (i + 1 == window.size()) e[k] += delta;
        w.Push(e);
      }
      return WindowLoss(w, refs, beta);
    };
    const double fd = (loss_with(1e-6) - loss_with(-1e-6)) / 2e-6;
    EXPECT_NEAR(grad[k], fd, 1e-8) << k;
  }
}

TEST(WindowLossTest, Errors) {
  PredictionWindow window(3);
  References refs;
  EXPECT_THROW(WindowLoss(window, refs, {0, 0, 1}), ContractError);
  window.Push(RealVec::Zero(kStepDim));
  EXPECT_THROW(WindowLoss(window, refs, {1, 0, 0}), ContractError);
  EXPECT_THROW(WindowLoss(window, refs, {0, 1, 0}), ContractError);
}

TEST(PredictionWindowTest, HoldsAtMostMaxWindowOlderEntries) {
  PredictionWindow window(3);
  std::vector<std::size_t> older;
  for (int tau = 1; tau <= 6; ++tau) {
    window.Push(RealVec::Constant(kStepDim, tau));
    older.push_back(window.size() - 1);
  }
  EXPECT_EQ(older, (std::vector<std::size_t>{0, 1, 2, 3, 3, 3}));
  EXPECT_EQ(window.entries().front()[0], 3.0);
  EXPECT_EQ(window.newest()[0], 6.0);
}

TEST(OptimizeInputTest, NormalizedStepExample) {
  const TrainedModel model = ParallelGradientModel();
  References refs;
  refs.u_ref = Eigen::Vector2d(-1, -1);
  OptConfig config = Config(Condition::kBPu, 1);
  config.step_size = 0.1;
  const OptimizeResult r =
      OptimizeInput(model, model.InitialState(), Eigen::Vector4d::Zero(),
                    Eigen::Vector2d::Zero(), 0.0, refs, config);
  EXPECT_EQ(r.updates, 1);
  EXPECT_NEAR(r.u.x(), -0.06, 1e-15);
  EXPECT_NEAR(r.u.y(), -0.08, 1e-15);
}

TEST(OptimizeInputTest, ClampHoldsBoundary) {
  const TrainedModel model = ParallelGradientModel();
  References refs;
  refs.u_ref = Eigen::Vector2d(-1, -1);
  const OptConfig config = Config(Condition::kBPu, 5);
  const OptimizeResult r =
      OptimizeInput(model, model.InitialState(), Eigen::Vector4d::Zero(),
                    Eigen::Vector2d(-1, -1), 0.0, refs, config);
  EXPECT_EQ(r.u, Eigen::Vector2d(-1, -1));
}

TEST(OptimizeInputTest, NoBpReturnsPredictedControl) {
  const TrainedModel model = testing::RandomModel(8, 5);
  const Eigen::Vector4d s(0.2, 0.3, 0.5, 0.5);
  const Eigen::Vector2d u(0.4, 0.1);
  StepVector x;
  x.s = s;
  x.u = u;
  const Prediction pred = PredictNext(model, model.InitialState(), x);
  References refs;
  refs.u_ref = Eigen::Vector2d(0.7, 0.7);
  const OptimizeResult r = OptimizeInput(model, model.InitialState(), s, u,
                                         0.0, refs, Config(Condition::kNoBP));
  EXPECT_EQ(r.u, pred.next.u);
  EXPECT_EQ(r.p_pred, pred.next.p);
  EXPECT_EQ(r.updates, 0);
}

TEST(OptimizeInputTest, StepsHaveLengthEpsilonAndStayInBox) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 20; ++trial) {
    const TrainedModel model = testing::RandomModel(8, 100 + trial);
    const Eigen::Vector4d s = testing::RandomVector(4, rng, 0, 1);
    const Eigen::Vector2d u = testing::RandomVector(2, rng, -0.5, 0.5);
    References refs;
    refs.u_ref = testing::RandomVector(2, rng);
    const OptConfig one = Config(Condition::kBPuP, 1);
    const OptimizeResult r =
        OptimizeInput(model, model.InitialState(), s, u, 0.0, refs, one);
    ASSERT_EQ(r.updates, 1);
    EXPECT_NEAR((r.u - u).norm(), one.step_size, 1e-12);
    const OptimizeResult many = OptimizeInput(
        model, model.InitialState(), s, u, 0.0, refs, Config(Condition::kBPuP, 50));
    EXPECT_TRUE((many.u.array() >= -1.0).all() && (many.u.array() <= 1.0).all());
  }
}

TEST(OptimizeInputTest, FirstStepFollowsFiniteDifferenceGradient) {
  std::mt19937_64 rng(8);
  const TrainedModel model = testing::RandomModel(8, 41);
  RecurrentState snapshot = model.InitialState();
  snapshot.h = testing::RandomVector(8, rng, -0.5, 0.5);
  const Eigen::Vector4d s(0.3, 0.2, 0.6, 0.4);
  const Eigen::Vector2d u(0.1, 0.2);
  References refs;
  refs.u_ref = Eigen::Vector2d(0.7, 0.7);
  const OptConfig config = Config(Condition::kBPuP, 1);
  auto loss_at = [&](const Eigen::Vector2d& v) {
    StepVector x;
    x.s = s;
    x.u = v;
    PredictionWindow w(3);
    w.Push(LstmStep(model.params, x.Pack(), snapshot).y);
    return WindowLoss(w, refs, config.beta);
  };
  Eigen::Vector2d g;
  for (int k = 0; k < 2; ++k) {
    Eigen::Vector2d hi = u, lo = u;
    hi[k] += 1e-6;
    lo[k] -= 1e-6;
    g[k] = (loss_at(hi) - loss_at(lo)) / 2e-6;
  }
  const OptimizeResult r =
      OptimizeInput(model, snapshot, s, u, 0.0, refs, config);
  const Eigen::Vector2d expected = u - config.step_size * g.normalized();
  EXPECT_NEAR((r.u - expected).norm(), 0.0, 1e-8);
  EXPECT_NEAR(r.first_loss, loss_at(u), 1e-15);
}

TEST(OptimizeInputTest, ZeroGradientSkipsUpdate) {
  const TrainedModel model = testing::ConstantModel(
      Eigen::Vector4d::Zero(), Eigen::Vector2d(0.5, 0.5), 0.2);
  References refs;
  refs.u_ref = Eigen::Vector2d(1, 0);
  const OptimizeResult r =
      OptimizeInput(model, model.InitialState(), Eigen::Vector4d::Zero(),
                    Eigen::Vector2d(0.3, 0.3), 0.0, refs, Config(Condition::kBPuP));
  EXPECT_EQ(r.updates, 0);
  EXPECT_EQ(r.u, Eigen::Vector2d(0.3, 0.3));
  EXPECT_NEAR(r.p_pred, 0.2, 1e-15);
}

TEST(OptimizeInputTest, NonFiniteLossReturnsInitialInput) {
  TrainedModel model = testing::RandomModel(4, 3);
  model.params.b_out[4] = std::numeric_limits<double>::infinity();
  References refs;
  refs.u_ref = Eigen::Vector2d(1, 0);
  const OptimizeResult r =
      OptimizeInput(model, model.InitialState(), Eigen::Vector4d::Zero(),
                    Eigen::Vector2d(0.3, 0.1), 0.0, refs, Config(Condition::kBPu));
  EXPECT_TRUE(r.aborted);
  EXPECT_EQ(r.u, Eigen::Vector2d(0.3, 0.1));
}

TEST(OptimizeInputTest, LeavesCallerStateUntouched) {
  std::mt19937_64 rng(9);
  const TrainedModel model = testing::RandomModel(8, 12);
  RecurrentState snapshot = model.InitialState();
  snapshot.h = testing::RandomVector(8, rng);
  snapshot.c = testing::RandomVector(8, rng);
  const RecurrentState before = snapshot;
  References refs;
  refs.u_ref = Eigen::Vector2d(0.7, 0.7);
  OptimizeInput(model, snapshot, Eigen::Vector4d::Constant(0.4),
                Eigen::Vector2d::Zero(), 0.0, refs, Config(Condition::kBPuP));
  EXPECT_EQ(snapshot, before);
}

TEST(MakeReferencesTest, Examples) {
  const EnvConfig env;
  EnvState state;
  const References refs = MakeReferences(state, env);
  ASSERT_TRUE(refs.u_ref.has_value());
  EXPECT_NEAR(refs.u_ref->x(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(refs.u_ref->y(), 1.0 / std::sqrt(2.0), 1e-15);
  EXPECT_FALSE(refs.s_ref.has_value());
  EXPECT_EQ(refs.p_ref, 0.0);
}

TEST(OptConfigTest, ConditionWeightsAndParsing) {
  EXPECT_EQ(Config(Condition::kBPu).beta.p, 0.0);
  EXPECT_EQ(Config(Condition::kBPp).beta.u, 0.0);
  EXPECT_EQ(Config(Condition::kBPuP).beta.u, 1.0);
  EXPECT_EQ(Config(Condition::kBPuP).beta.p, 1.0);
  for (Condition c : {Condition::kNoBP, Condition::kBPu, Condition::kBPp,
                      Condition::kBPuP}) {
    EXPECT_EQ(ParseCondition(ToString(c)), c);
  }
  EXPECT_THROW(ParseCondition("bp"), ContractError);
  OptConfig bad;
  bad.u_min = Eigen::Vector2d(1, -1);
  EXPECT_THROW(bad.Validate(), ContractError);
}

}  // namespace
}  // namespace assist
