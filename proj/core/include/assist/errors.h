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

#ifndef ASSIST_ERRORS_H_
#define ASSIST_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace assist {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke an operation's precondition (shape, range, state).
class ContractError : public Error {
 public:
  using Error::Error;
};

// A loss or model output became NaN/Inf. `step` is the sequence index at
// which the non-finite value was first seen.
class NonFiniteError : public Error {
 public:
  NonFiniteError(const std::string& what, std::size_t step)
      : Error(what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

// A trained model produced a non-finite prediction.
class ModelCorruptionError : public Error {
 public:
  using Error::Error;
};

// Malformed, truncated or incompatible files and datasets.
class DataError : public Error {
 public:
  using Error::Error;
};

// Bad on-disk format version or tensor shape in a model/dataset file.
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

// Checksum mismatch in a model file.
class ChecksumError : public DataError {
 public:
  using DataError::DataError;
};

// Invalid run configuration: unknown key, wrong type, out-of-range value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// The scripted teacher could not collect enough successful episodes.
class CollectionError : public Error {
 public:
  using Error::Error;
};

}  // namespace assist

#endif  // ASSIST_ERRORS_H_
