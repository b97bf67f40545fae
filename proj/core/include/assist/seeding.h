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

#ifndef ASSIST_SEEDING_H_
#define ASSIST_SEEDING_H_

#include <cstdint>

namespace assist {

// SplitMix64 finalizer over (base, stream, index). Used to give every
// episode, stage and copy its own reproducible seed.
constexpr std::uint64_t DeriveSeed(std::uint64_t base, std::uint64_t stream,
                                   std::uint64_t index = 0) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1) +
                    0xbf58476d1ce4e5b9ULL * index;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream ids, one per consumer of randomness.
inline constexpr std::uint64_t kStreamCollect = 1;
inline constexpr std::uint64_t kStreamInit = 2;
inline constexpr std::uint64_t kStreamShuffle = 3;
inline constexpr std::uint64_t kStreamAugment = 4;
inline constexpr std::uint64_t kStreamEval = 5;
inline constexpr std::uint64_t kStreamServe = 6;
inline constexpr std::uint64_t kStreamTeacher = 7;

}  // namespace assist

#endif  // ASSIST_SEEDING_H_
