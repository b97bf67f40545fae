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

#include "assist/lstm.h"

#include <cmath>
#include <string>

#include <fmt/format.h>

#include "assist/errors.h"

namespace assist {
namespace {

double Sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

template <typename Derived>
void Copy(const Eigen::DenseBase<Derived>& block, RealVec& flat,
          Eigen::Index& offset) {
  for (Eigen::Index r = 0; r < block.rows(); ++r) {
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      flat[offset++] = block(r, c);
    }
  }
}

template <typename Derived>
void Paste(const RealVec& flat, Eigen::Index& offset,
           Eigen::DenseBase<Derived>& block) {
  for (Eigen::Index r = 0; r < block.rows(); ++r) {
    for (Eigen::Index c = 0; c < block.cols(); ++c) {
      block(r, c) = flat[offset++];
    }
  }
}

void CheckDims(const LstmParams& params, const RealVec& x,
               const RecurrentState& state) {
  if (x.size() != params.input_dim) {
    throw ContractError(fmt::format("lstm: input has {} entries, expected {}",
                                    x.size(), params.input_dim));
  }
  if (state.h.size() != params.hidden_dim ||
      state.c.size() != params.hidden_dim) {
    throw ContractError(fmt::format(
        "lstm: recurrent state has sizes ({}, {}), expected {}",
        state.h.size(), state.c.size(), params.hidden_dim));
  }
}

// Forward cell update writing every activation into `cache`.
void CellForward(const LstmParams& p, const RealVec& x,
                 const RecurrentState& state, LstmStepCache& cache) {
  const int n = p.hidden_dim;
  cache.x = x;
  cache.h_prev = state.h;
  cache.c_prev = state.c;
  cache.gates.noalias() = p.w_ih * x;
  cache.gates.noalias() += p.w_hh * state.h;
  cache.gates += p.b;
  for (int k = 0; k < n; ++k) {
    cache.gates[k] = Sigmoid(cache.gates[k]);
    cache.gates[n + k] = Sigmoid(cache.gates[n + k]);
    cache.gates[2 * n + k] = std::tanh(cache.gates[2 * n + k]);
    cache.gates[3 * n + k] = Sigmoid(cache.gates[3 * n + k]);
  }
  cache.c = cache.gates.segment(n, n).cwiseProduct(state.c) +
            cache.gates.segment(0, n).cwiseProduct(cache.gates.segment(2 * n, n));
  cache.tanh_c = cache.c.array().tanh();
  cache.h = cache.gates.segment(3 * n, n).cwiseProduct(cache.tanh_c);
}

void ReverseSweep(const LstmParams& p, const LstmTape& tape,
                  std::span<const RealVec> output_grads, LstmParams& grads,
                  std::vector<RealVec>* input_grads,
                  RecurrentState* initial_grads) {
  const std::size_t steps = tape.steps.size();
  if (output_grads.size() != steps) {
    throw ContractError(fmt::format(
        "lstm backward: {} output gradients for a tape of {} steps",
        output_grads.size(), steps));
  }
  for (std::size_t t = 0; t < steps; ++t) {
    if (output_grads[t].size() != p.output_dim) {
      throw ContractError(fmt::format(
          "lstm backward: output gradient {} has {} entries, expected {}", t,
          output_grads[t].size(), p.output_dim));
    }
    if (!output_grads[t].allFinite()) {
      throw NonFiniteError(
          fmt::format("lstm backward: non-finite loss gradient at step {}", t),
          t);
    }
  }

  const int n = p.hidden_dim;
  if (input_grads != nullptr) input_grads->assign(steps, RealVec());
  RealVec dh_next = RealVec::Zero(n);
  RealVec dc_next = RealVec::Zero(n);
  RealVec dh(n), dc(n), dz(4 * n);

  for (std::size_t s = steps; s-- > 0;) {
    const LstmStepCache& k = tape.steps[s];
    const RealVec& dy = output_grads[s];

    grads.w_out.noalias() += dy * k.h.transpose();
    grads.b_out += dy;
    dh.noalias() = p.w_out.transpose() * dy;
    dh += dh_next;

    const auto i = k.gates.segment(0, n).array();
    const auto f = k.gates.segment(n, n).array();
    const auto g = k.gates.segment(2 * n, n).array();
    const auto o = k.gates.segment(3 * n, n).array();
    const auto tc = k.tanh_c.array();

    dc = (dh.array() * o * (1.0 - tc * tc)).matrix() + dc_next;
    dz.segment(0, n) = (dc.array() * g * i * (1.0 - i)).matrix();
    dz.segment(n, n) = (dc.array() * k.c_prev.array() * f * (1.0 - f)).matrix();
    dz.segment(2 * n, n) = (dc.array() * i * (1.0 - g * g)).matrix();
    dz.segment(3 * n, n) = (dh.array() * tc * o * (1.0 - o)).matrix();

    grads.w_ih.noalias() += dz * k.x.transpose();
    grads.w_hh.noalias() += dz * k.h_prev.transpose();
    grads.b += dz;

    if (input_grads != nullptr) {
      (*input_grads)[s].noalias() = p.w_ih.transpose() * dz;
    }
    dh_next.noalias() = p.w_hh.transpose() * dz;
    dc_next = (dc.array() * f).matrix();
  }
  if (initial_grads != nullptr) {
    initial_grads->h = dh_next;
    initial_grads->c = dc_next;
  }
}

}  // namespace

LstmParams LstmParams::Zeros(int input_dim, int hidden_dim, int output_dim) {
  if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0) {
    throw ContractError(fmt::format("lstm: dims must be positive, got {}/{}/{}",
                                    input_dim, hidden_dim, output_dim));
  }
  LstmParams p;
  p.input_dim = input_dim;
  p.hidden_dim = hidden_dim;
  p.output_dim = output_dim;
  p.w_ih = RealMat::Zero(4 * hidden_dim, input_dim);
  p.w_hh = RealMat::Zero(4 * hidden_dim, hidden_dim);
  p.b = RealVec::Zero(4 * hidden_dim);
  p.w_out = RealMat::Zero(output_dim, hidden_dim);
  p.b_out = RealVec::Zero(output_dim);
  return p;
}

LstmParams LstmParams::Random(int input_dim, int hidden_dim, int output_dim,
                              std::mt19937_64& rng) {
  LstmParams p = Zeros(input_dim, hidden_dim, output_dim);
  const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
  std::uniform_real_distribution<double> dist(-bound, bound);
  RealVec flat(p.NumParameters());
  for (Eigen::Index k = 0; k < flat.size(); ++k) flat[k] = dist(rng);
  p.Unflatten(flat);
  return p;
}

std::int64_t LstmParams::NumParameters() const {
  return w_ih.size() + w_hh.size() + b.size() + w_out.size() + b_out.size();
}

RealVec LstmParams::Flatten() const {
  RealVec flat(NumParameters());
  Eigen::Index offset = 0;
  Copy(w_ih, flat, offset);
  Copy(w_hh, flat, offset);
  Copy(b, flat, offset);
  Copy(w_out, flat, offset);
  Copy(b_out, flat, offset);
  return flat;
}

void LstmParams::Unflatten(const RealVec& flat) {
  if (flat.size() != NumParameters()) {
    throw ContractError(fmt::format("lstm: flat vector has {} entries, expected {}",
                                    flat.size(), NumParameters()));
  }
  Eigen::Index offset = 0;
  Paste(flat, offset, w_ih);
  Paste(flat, offset, w_hh);
  Paste(flat, offset, b);
  Paste(flat, offset, w_out);
  Paste(flat, offset, b_out);
}

void LstmParams::Validate() const {
  const int h4 = 4 * hidden_dim;
  if (input_dim <= 0 || hidden_dim <= 0 || output_dim <= 0 ||
      w_ih.rows() != h4 || w_ih.cols() != input_dim || w_hh.rows() != h4 ||
      w_hh.cols() != hidden_dim || b.size() != h4 ||
      w_out.rows() != output_dim || w_out.cols() != hidden_dim ||
      b_out.size() != output_dim) {
    throw ContractError("lstm: parameter shapes are inconsistent");
  }
  if (!w_ih.allFinite() || !w_hh.allFinite() || !b.allFinite() ||
      !w_out.allFinite() || !b_out.allFinite()) {
    throw ContractError("lstm: parameters contain non-finite values");
  }
}

bool LstmParams::operator==(const LstmParams& other) const {
  return input_dim == other.input_dim && hidden_dim == other.hidden_dim &&
         output_dim == other.output_dim && w_ih == other.w_ih &&
         w_hh == other.w_hh && b == other.b && w_out == other.w_out &&
         b_out == other.b_out;
}

RecurrentState RecurrentState::Zeros(int hidden_dim) {
  return {RealVec::Zero(hidden_dim), RealVec::Zero(hidden_dim)};
}

bool RecurrentState::operator==(const RecurrentState& other) const {
  return h.size() == other.h.size() && c.size() == other.c.size() &&
         h == other.h && c == other.c;
}

LstmStepResult LstmStep(const LstmParams& params, const RealVec& x,
                        const RecurrentState& state) {
  CheckDims(params, x, state);
  LstmStepCache cache;
  CellForward(params, x, state, cache);
  LstmStepResult result;
  result.y = params.w_out * cache.h + params.b_out;
  result.state.h = std::move(cache.h);
  result.state.c = std::move(cache.c);
  return result;
}

RecurrentState LstmTape::FinalState() const {
  if (steps.empty()) return initial;
  return {steps.back().h, steps.back().c};
}

LstmTape LstmForward(const LstmParams& params, std::span<const RealVec> inputs,
                     const RecurrentState& initial) {
  LstmTape tape;
  tape.initial = initial;
  tape.steps.resize(inputs.size());
  tape.outputs.resize(inputs.size());
  RecurrentState state = initial;
  for (std::size_t t = 0; t < inputs.size(); ++t) {
    CheckDims(params, inputs[t], state);
    LstmStepCache& cache = tape.steps[t];
    CellForward(params, inputs[t], state, cache);
    tape.outputs[t].noalias() = params.w_out * cache.h;
    tape.outputs[t] += params.b_out;
    state.h = cache.h;
    state.c = cache.c;
  }
  return tape;
}

LstmGradients LstmBackward(const LstmParams& params, const LstmTape& tape,
                           std::span<const RealVec> output_grads) {
  LstmGradients out;
  out.params =
      LstmParams::Zeros(params.input_dim, params.hidden_dim, params.output_dim);
  ReverseSweep(params, tape, output_grads, out.params, &out.inputs,
               &out.initial);
  return out;
}

void LstmAccumulateParamGrads(const LstmParams& params, const LstmTape& tape,
                              std::span<const RealVec> output_grads,
                              LstmParams& grads) {
  ReverseSweep(params, tape, output_grads, grads, nullptr, nullptr);
}

}  // namespace assist
