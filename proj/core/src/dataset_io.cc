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

#include "assist/dataset_io.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include <fmt/format.h>

#include "assist/errors.h"
#include "json_util.h"

namespace assist {
namespace {

using internal::Json;

std::string HeaderLine(const DatasetHeader& header) {
  Json j;
  j["format_version"] = header.format_version;
  j["world_size"] = header.env.world_size;
  j["max_speed"] = header.env.agent_max_speed;
  j["dims"] = {{"s", kStateDim}, {"u", kControlDim}};
  j["created_at"] = header.created_at;
  j["env_config"] = internal::EnvConfigToJson(header.env, /*with_seed=*/true);
  if (!header.run_config.empty()) {
    j["run_config"] = Json::parse(header.run_config);
  }
  return j.dump();
}

DatasetHeader ParseHeader(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("dataset line 1: {}", e.what()));
  }
  if (!j.is_object() || !j.contains("format_version")) {
    throw DataError("dataset line 1: missing header record");
  }
  const Json& version = j["format_version"];
  if (!version.is_number_integer() ||
      version.get<int>() != kDatasetFormatVersion) {
    throw FormatError(fmt::format("dataset: format_version {} is not supported "
                                  "(expected {})",
                                  version.dump(), kDatasetFormatVersion));
  }
  DatasetHeader header;
  internal::StrictObject<DataError> o(j, "dataset line 1");
  double world_size = 0.0, max_speed = 0.0;
  o.Read("format_version", header.format_version);
  o.Read("world_size", world_size);
  o.Read("max_speed", max_speed);
  o.Read("created_at", header.created_at);
  if (const Json* dims = o.Child("dims")) {
    if (!dims->is_object() || dims->value("s", 0) != kStateDim ||
        dims->value("u", 0) != kControlDim) {
      throw FormatError("dataset line 1: dims must be {\"s\":4,\"u\":2}");
    }
  }
  if (const Json* env = o.Child("env_config")) {
    internal::EnvConfigFromJson<DataError>(*env, "dataset line 1 env_config",
                                           header.env, /*allow_seed=*/true);
  } else {
    header.env.world_size = world_size;
    header.env.agent_max_speed = max_speed;
  }
  if (const Json* run = o.Child("run_config")) header.run_config = run->dump();
  o.Finish();
  if (header.env.world_size != world_size ||
      header.env.agent_max_speed != max_speed) {
    throw DataError("dataset line 1: world_size/max_speed disagree with env");
  }
  return header;
}

template <typename Vec>
std::string FormatArray(const Vec& v) {
  std::string out = "[";
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (k > 0) out += ',';
    out += FormatReal(v[k]);
  }
  out += ']';
  return out;
}

template <int N>
Eigen::Matrix<double, N, 1> ReadArray(const Json& j, const char* key,
                                      std::size_t line) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_array() || it->size() != N) {
    throw DataError(fmt::format("dataset line {}: '{}' must be an array of {}",
                                line, key, N));
  }
  Eigen::Matrix<double, N, 1> out;
  for (int k = 0; k < N; ++k) {
    if (!(*it)[k].is_number()) {
      throw DataError(
          fmt::format("dataset line {}: '{}' has a non-number", line, key));
    }
    out[k] = (*it)[k].get<double>();
  }
  return out;
}

}  // namespace

std::string FormatReal(double value) {
  if (!std::isfinite(value)) {
    throw DataError("dataset: cannot serialize a non-finite value");
  }
  std::string text = fmt::format("{:.17g}", value);
  if (text.find_first_of(".e") == std::string::npos) text += ".0";
  return text;
}

std::string SerializeEpisodeRecords(const Episode& episode) {
  std::string out;
  for (std::size_t t = 0; t < episode.steps.size(); ++t) {
    const StepVector& step = episode.steps[t];
    out += fmt::format("{{\"episode_id\":{},\"t\":{},\"s\":{},\"u\":{},\"p\":{}",
                       episode.meta.episode_id, t, FormatArray(step.s),
                       FormatArray(step.u), FormatReal(step.p));
    if (t == 0) {
      out += fmt::format(",\"seed\":{},\"source\":\"{}\"", episode.meta.seed,
                         ToString(episode.meta.source));
    }
    if (t + 1 == episode.steps.size()) {
      out += fmt::format(",\"outcome\":\"{}\"", ToString(episode.meta.outcome));
    }
    out += "}\n";
  }
  return out;
}

std::string SerializeDataset(const Dataset& dataset) {
  std::string out = HeaderLine(dataset.header) + "\n";
  for (const Episode& episode : dataset.episodes) {
    if (episode.steps.empty()) {
      throw DataError(fmt::format("dataset: episode {} has no steps",
                                  episode.meta.episode_id));
    }
    out += SerializeEpisodeRecords(episode);
  }
  return out;
}

Dataset ParseDataset(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || line.empty()) {
    throw DataError("dataset: empty file");
  }
  Dataset dataset;
  dataset.header = ParseHeader(line);

  std::size_t line_no = 1;
  Episode* current = nullptr;
  bool closed = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(fmt::format("dataset line {}: {}", line_no, e.what()));
    }
    if (!j.is_object() || !j.contains("episode_id") || !j.contains("t") ||
        !j["episode_id"].is_number_integer() || !j["t"].is_number_integer()) {
      throw DataError(fmt::format(
          "dataset line {}: step record needs integer episode_id and t",
          line_no));
    }
    const int id = j["episode_id"].get<int>();
    const std::size_t t = j["t"].get<std::size_t>();
    if (t == 0) {
      if (!closed) {
        throw DataError(fmt::format(
            "dataset line {}: episode {} ended without an outcome", line_no,
            current->meta.episode_id));
      }
      dataset.episodes.emplace_back();
      current = &dataset.episodes.back();
      current->meta.episode_id = id;
      closed = false;
      try {
        current->meta.seed = j.at("seed").get<std::uint64_t>();
        current->meta.source =
            ParseEpisodeSource(j.at("source").get<std::string>());
      } catch (const nlohmann::json::exception& e) {
        throw DataError(fmt::format("dataset line {}: {}", line_no, e.what()));
      }
    } else if (current == nullptr || closed ||
               id != current->meta.episode_id ||
               t != current->steps.size()) {
      throw DataError(fmt::format(
          "dataset line {}: record (episode {}, t {}) out of sequence", line_no,
          id, t));
    }
    StepVector step;
    step.s = ReadArray<kStateDim>(j, "s", line_no);
    step.u = ReadArray<kControlDim>(j, "u", line_no);
    if (!j.contains("p") || !j["p"].is_number()) {
      throw DataError(fmt::format("dataset line {}: 'p' missing", line_no));
    }
    step.p = j["p"].get<double>();
    current->steps.push_back(step);
    if (auto it = j.find("outcome"); it != j.end()) {
      if (!it->is_string()) {
        throw DataError(
            fmt::format("dataset line {}: 'outcome' must be a string", line_no));
      }
      current->meta.outcome = ParseEpisodeOutcome(it->get<std::string>());
      closed = true;
    }
  }
  if (!closed) {
    throw DataError(fmt::format("dataset: episode {} is missing its outcome",
                                current->meta.episode_id));
  }
  return dataset;
}

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path) {
  const std::string text = SerializeDataset(dataset);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError(fmt::format("cannot write dataset '{}'", path.string()));
  }
  out << text;
  if (!out) throw DataError(fmt::format("write failed for '{}'", path.string()));
}

Dataset LoadDataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError(fmt::format("cannot read dataset '{}'", path.string()));
  }
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseDataset(text);
}

DatasetAppender::DatasetAppender(std::filesystem::path path,
                                 DatasetHeader header)
    : path_(std::move(path)) {
  if (std::filesystem::exists(path_) && std::filesystem::file_size(path_) > 0) {
    const Dataset existing = LoadDataset(path_);
    for (const Episode& e : existing.episodes) {
      next_id_ = std::max(next_id_, e.meta.episode_id + 1);
    }
  } else {
    std::ofstream out(path_, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw DataError(fmt::format("cannot create dataset '{}'", path_.string()));
    }
    out << HeaderLine(header) << "\n";
  }
}

int DatasetAppender::Append(Episode episode) {
  std::lock_guard<std::mutex> lock(mutex_);
  episode.meta.episode_id = next_id_;
  const std::string records = SerializeEpisodeRecords(episode);
  std::ofstream out(path_, std::ios::binary | std::ios::app);
  if (!out) {
    throw DataError(fmt::format("cannot append to '{}'", path_.string()));
  }
  out << records;
  out.flush();
  if (!out) throw DataError(fmt::format("append failed for '{}'", path_.string()));
  ++written_;
  return next_id_++;
}

int DatasetAppender::episodes_written() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return written_;
}

}  // namespace assist
