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

#include "assist/model_io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>
#include <type_traits>

#include <fmt/format.h>
#include <zlib.h>

#include "assist/errors.h"

namespace assist {
namespace {

static_assert(std::endian::native == std::endian::little,
              "model files are written in host byte order");

constexpr char kMagic[8] = {'A', 'S', 'S', 'T', 'M', 'D', 'L', '\0'};

class Writer {
 public:
  template <typename T>
  void Put(T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const char*>(&value);
    bytes_.append(p, sizeof(T));
  }
  void PutBytes(const void* data, std::size_t n) {
    bytes_.append(static_cast<const char*>(data), n);
  }
  std::string& bytes() { return bytes_; }

 private:
  std::string bytes_;
};

class Reader {
 public:
  Reader(const std::string& bytes, std::size_t end) : bytes_(bytes), end_(end) {}

  template <typename T>
  T Get() {
    T value;
    Need(sizeof(T));
    std::memcpy(&value, bytes_.data() + pos_, sizeof(T));
    pos_ += sizeof(T);
    return value;
  }
  std::string GetBytes(std::size_t n) {
    Need(n);
    std::string out = bytes_.substr(pos_, n);
    pos_ += n;
    return out;
  }
  std::size_t remaining() const { return end_ - pos_; }

 private:
  void Need(std::size_t n) const {
    if (n > end_ - pos_) throw FormatError("model file: record runs past end");
  }
  const std::string& bytes_;
  std::size_t end_;
  std::size_t pos_ = 0;
};

std::uint32_t Crc32(const std::string& bytes, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
              static_cast<uInt>(n));
  return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::string SerializeModel(const TrainedModel& model) {
  model.params.Validate();
  Writer w;
  w.PutBytes(kMagic, sizeof(kMagic));
  w.Put<std::uint32_t>(kModelFormatVersion);
  w.Put<std::int32_t>(model.params.input_dim);
  w.Put<std::int32_t>(model.params.hidden_dim);
  w.Put<std::int32_t>(model.params.output_dim);
  w.Put<double>(model.norm.world_size);
  w.Put<double>(model.norm.max_speed);
  w.Put<std::uint64_t>(model.config.seed);
  w.Put<double>(model.config.alpha.s);
  w.Put<double>(model.config.alpha.u);
  w.Put<double>(model.config.alpha.p);
  w.Put<double>(model.config.lr);
  w.Put<std::int32_t>(model.config.batch_size);
  w.Put<std::int32_t>(model.config.epochs);

  const RealVec flat = model.params.Flatten();
  w.Put<std::uint64_t>(static_cast<std::uint64_t>(flat.size()));
  w.PutBytes(flat.data(), sizeof(double) * flat.size());
  w.Put<std::uint64_t>(model.loss_curve.size());
  w.PutBytes(model.loss_curve.data(), sizeof(double) * model.loss_curve.size());
  w.Put<std::uint64_t>(model.run_config.size());
  w.PutBytes(model.run_config.data(), model.run_config.size());

  const std::uint32_t crc = Crc32(w.bytes(), w.bytes().size());
  w.Put<std::uint32_t>(crc);
  return std::move(w.bytes());
}

TrainedModel ParseModel(const std::string& bytes) {
  if (bytes.size() < sizeof(kMagic) + sizeof(std::uint32_t) * 2) {
    throw ChecksumError("model file: truncated");
  }
  const std::size_t body = bytes.size() - sizeof(std::uint32_t);
  std::uint32_t stored;
  std::memcpy(&stored, bytes.data() + body, sizeof(stored));
  if (Crc32(bytes, body) != stored) {
    throw ChecksumError("model file: checksum mismatch (truncated or corrupt)");
  }

  Reader r(bytes, body);
  if (r.GetBytes(sizeof(kMagic)) != std::string(kMagic, sizeof(kMagic))) {
    throw FormatError("model file: bad magic");
  }
  const auto version = r.Get<std::uint32_t>();
  if (version != kModelFormatVersion) {
    throw FormatError(fmt::format("model file: format version {} unsupported",
                                  version));
  }
  TrainedModel model;
  const int input_dim = r.Get<std::int32_t>();
  const int hidden_dim = r.Get<std::int32_t>();
  const int output_dim = r.Get<std::int32_t>();
  if (input_dim != kStepDim || output_dim != kStepDim || hidden_dim <= 0) {
    throw FormatError(fmt::format(
        "model file: shape {}/{}/{} does not match the {}-dim step vector",
        input_dim, hidden_dim, output_dim, kStepDim));
  }
  model.norm.world_size = r.Get<double>();
  model.norm.max_speed = r.Get<double>();
  model.config.input_dim = input_dim;
  model.config.hidden_dim = hidden_dim;
  model.config.output_dim = output_dim;
  model.config.seed = r.Get<std::uint64_t>();
  model.config.alpha.s = r.Get<double>();
  model.config.alpha.u = r.Get<double>();
  model.config.alpha.p = r.Get<double>();
  model.config.lr = r.Get<double>();
  model.config.batch_size = r.Get<std::int32_t>();
  model.config.epochs = r.Get<std::int32_t>();

  model.params = LstmParams::Zeros(input_dim, hidden_dim, output_dim);
  const auto n_params = r.Get<std::uint64_t>();
  if (n_params != static_cast<std::uint64_t>(model.params.NumParameters())) {
    throw FormatError("model file: parameter count does not match dims");
  }
  RealVec flat(static_cast<Eigen::Index>(n_params));
  const std::string blob = r.GetBytes(sizeof(double) * n_params);
  std::memcpy(flat.data(), blob.data(), blob.size());
  model.params.Unflatten(flat);

  const auto n_loss = r.Get<std::uint64_t>();
  if (n_loss > r.remaining() / sizeof(double)) {
    throw FormatError("model file: loss curve runs past end");
  }
  model.loss_curve.resize(n_loss);
  const std::string curve = r.GetBytes(sizeof(double) * n_loss);
  std::memcpy(model.loss_curve.data(), curve.data(), curve.size());
  const auto n_config = r.Get<std::uint64_t>();
  model.run_config = r.GetBytes(n_config);
  if (r.remaining() != 0) throw FormatError("model file: trailing bytes");

  model.norm.Validate();
  model.params.Validate();
  return model;
}

void SaveModel(const TrainedModel& model, const std::filesystem::path& path) {
  const std::string bytes = SerializeModel(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError(fmt::format("cannot write model '{}'", path.string()));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

TrainedModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError(fmt::format("cannot read model '{}'", path.string()));
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  return ParseModel(bytes);
}

}  // namespace assist
