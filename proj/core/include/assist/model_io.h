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

#ifndef ASSIST_MODEL_IO_H_
#define ASSIST_MODEL_IO_H_

#include <cstdint>
#include <filesystem>
#include <string>

#include "assist/dynamics_model.h"

namespace assist {

inline constexpr std::uint32_t kModelFormatVersion = 1;

// Little-endian binary container:
//
//   char[8]  magic "ASSTMDL\0"
//   u32      format_version
//   i32 x3   input_dim, hidden_dim, output_dim
//   f64 x2   world_size, max_speed
//   u64      seed
//   f64 x4   alpha_s, alpha_u, alpha_p, lr
//   i32 x2   batch_size, epochs
//   u64 + f64[n]  parameters, LstmParams::Flatten() order
//   u64 + f64[n]  per-epoch training loss
//   u64 + u8[n]   effective run config (JSON text)
//   u32      CRC-32 of every preceding byte
std::string SerializeModel(const TrainedModel& model);
TrainedModel ParseModel(const std::string& bytes);

void SaveModel(const TrainedModel& model, const std::filesystem::path& path);

// Throws ChecksumError on a truncated or corrupted file, FormatError on a
// foreign magic, version or tensor shape.
TrainedModel LoadModel(const std::filesystem::path& path);

}  // namespace assist

#endif  // ASSIST_MODEL_IO_H_
