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

#ifndef ASSIST_DATASET_IO_H_
#define ASSIST_DATASET_IO_H_

#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>

#include "assist/data_pipeline.h"

namespace assist {

inline constexpr int kDatasetFormatVersion = 1;

// Line-delimited JSON. The first line is the header record
//   {"format_version":1,"world_size":..,"max_speed":..,
//    "dims":{"s":4,"u":2},"created_at":..,"env_config":{..},
//    "run_config":{..}}
// followed by one record per step
//   {"episode_id":..,"t":..,"s":[4],"u":[2],"p":..}
// The t == 0 record also carries "seed" and "source"; the final record of
// an episode carries "outcome". Reals are written with 17 significant
// digits so a load/save cycle reproduces the file byte for byte.
std::string SerializeDataset(const Dataset& dataset);
Dataset ParseDataset(std::string_view text);

void SaveDataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset LoadDataset(const std::filesystem::path& path);

std::string SerializeEpisodeRecords(const Episode& episode);

// Formats a double so that parsing it back yields the identical bits.
std::string FormatReal(double value);

// Appends finished episodes to a dataset file, creating it with `header`
// when missing. Appends are serialized through one mutex so several
// sessions can share a writer. Episode ids continue from the file's
// largest id.
class DatasetAppender {
 public:
  DatasetAppender(std::filesystem::path path, DatasetHeader header);

  // Returns the id assigned to the appended episode.
  int Append(Episode episode);
  int episodes_written() const;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  mutable std::mutex mutex_;
  int next_id_ = 0;
  int written_ = 0;
};

}  // namespace assist

#endif  // ASSIST_DATASET_IO_H_
