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

#ifndef ASSIST_LSTM_H_
#define ASSIST_LSTM_H_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace assist {

using RealVec = Eigen::VectorXd;
using RealMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Single-layer LSTM followed by an affine output head.
//
// Gate blocks are stacked in the fixed order (input, forget, cell, output)
// along the rows of `w_ih`, `w_hh` and `b`; block k occupies rows
// [k * hidden_dim, (k + 1) * hidden_dim). The model file format and
// Flatten() both depend on this order.
//
//   z  = w_ih x + w_hh h_prev + b
//   i  = sigmoid(z_i), f = sigmoid(z_f), g = tanh(z_g), o = sigmoid(z_o)
//   c  = f * c_prev + i * g
//   h  = o * tanh(c)
//   y  = w_out h + b_out          (no head activation; callers apply one)
struct LstmParams {
  int input_dim = 0;
  int hidden_dim = 0;
  int output_dim = 0;
  RealMat w_ih;   // (4 * hidden) x input
  RealMat w_hh;   // (4 * hidden) x hidden
  RealVec b;      // 4 * hidden
  RealMat w_out;  // output x hidden
  RealVec b_out;  // output

  static LstmParams Zeros(int input_dim, int hidden_dim, int output_dim);

  // Uniform(-1/sqrt(hidden), 1/sqrt(hidden)) for every entry.
  static LstmParams Random(int input_dim, int hidden_dim, int output_dim,
                           std::mt19937_64& rng);

  std::int64_t NumParameters() const;

  // Concatenation of w_ih, w_hh, b, w_out, b_out (each row-major).
  RealVec Flatten() const;
  void Unflatten(const RealVec& flat);

  // Throws ContractError on inconsistent shapes or non-finite entries.
  void Validate() const;

  bool operator==(const LstmParams& other) const;
};

struct RecurrentState {
  RealVec h;
  RealVec c;

  static RecurrentState Zeros(int hidden_dim);
  bool operator==(const RecurrentState& other) const;
};

struct LstmStepResult {
  RealVec y;
  RecurrentState state;
};

// One cell update plus output head. Pure.
LstmStepResult LstmStep(const LstmParams& params, const RealVec& x,
                        const RecurrentState& state);

// Activations kept from a forward pass for the reverse sweep.
struct LstmStepCache {
  RealVec x;
  RealVec h_prev;
  RealVec c_prev;
  RealVec gates;   // post-activation i, f, g, o stacked like z
  RealVec c;
  RealVec tanh_c;
  RealVec h;
};

struct LstmTape {
  RecurrentState initial;
  std::vector<LstmStepCache> steps;
  std::vector<RealVec> outputs;  // raw head outputs y_t

  RecurrentState FinalState() const;
};

LstmTape LstmForward(const LstmParams& params, std::span<const RealVec> inputs,
                     const RecurrentState& initial);

struct LstmGradients {
  LstmParams params;             // same layout as the model, holds dL/dW
  std::vector<RealVec> inputs;   // dL/dx_t
  RecurrentState initial;        // dL/dh_0, dL/dc_0
};

// Reverse-mode sweep through time. `output_grads[t]` is dL/dy_t for the
// scalar loss being differentiated; it must have one entry per tape step.
// A non-finite entry raises NonFiniteError carrying its step index.
LstmGradients LstmBackward(const LstmParams& params, const LstmTape& tape,
                           std::span<const RealVec> output_grads);

// Accumulating variant used by training to avoid reallocating the
// parameter-gradient buffers for every sequence. Input gradients are not
// produced.
void LstmAccumulateParamGrads(const LstmParams& params, const LstmTape& tape,
                              std::span<const RealVec> output_grads,
                              LstmParams& grads);

}  // namespace assist

#endif  // ASSIST_LSTM_H_
