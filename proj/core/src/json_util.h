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

// Internal JSON helpers shared by the config and dataset readers.

#ifndef ASSIST_SRC_JSON_UTIL_H_
#define ASSIST_SRC_JSON_UTIL_H_

#include <set>
#include <string>

#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "assist/maze_env.h"

namespace assist::internal {

using Json = nlohmann::ordered_json;

// Reads optional keys from one JSON object and rejects keys nobody asked
// for. Errors are raised as `ErrorT` prefixed with `where`.
template <typename ErrorT>
class StrictObject {
 public:
  StrictObject(const Json& object, std::string where)
      : object_(object), where_(std::move(where)) {
    if (!object_.is_object()) {
      throw ErrorT(fmt::format("{}: expected a JSON object", where_));
    }
  }

  template <typename T>
  void Read(const char* key, T& out) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw ErrorT(fmt::format("{}.{}: {}", where_, key, e.what()));
    }
  }

  void ReadVec2(const char* key, Vec2& out) {
    seen_.insert(key);
    auto it = object_.find(key);
    if (it == object_.end()) return;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
        !(*it)[1].is_number()) {
      throw ErrorT(fmt::format("{}.{}: expected [x, y]", where_, key));
    }
    out = Vec2((*it)[0].template get<double>(), (*it)[1].template get<double>());
  }

  const Json* Child(const char* key) {
    seen_.insert(key);
    auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  // Throws on any key not consumed by Read/ReadVec2/Child.
  void Finish() const {
    for (auto it = object_.begin(); it != object_.end(); ++it) {
      if (!seen_.count(it.key())) {
        throw ErrorT(fmt::format("{}: unknown key '{}'", where_, it.key()));
      }
    }
  }

  const std::string& where() const { return where_; }

 private:
  const Json& object_;
  std::string where_;
  std::set<std::string> seen_;
};

inline Json Vec2ToJson(const Vec2& v) { return Json::array({v.x(), v.y()}); }

Json EnvConfigToJson(const EnvConfig& env, bool with_seed);

// `allow_seed` admits the "seed" key (dataset headers carry it; run
// configs take the seed from the top level instead).
template <typename ErrorT>
void EnvConfigFromJson(const Json& j, const std::string& where,
                       EnvConfig& env, bool allow_seed) {
  StrictObject<ErrorT> o(j, where);
  o.Read("world_size", env.world_size);
  o.ReadVec2("start", env.start);
  o.ReadVec2("goal", env.goal);
  o.Read("agent_max_speed", env.agent_max_speed);
  o.Read("agent_radius", env.agent_radius);
  o.Read("obstacle_radius", env.obstacle_radius);
  o.Read("obstacle_speed", env.obstacle_speed);
  o.Read("obstacle_bias", env.obstacle_bias);
  o.Read("obstacle_noise", env.obstacle_noise);
  o.Read("spawn_along_min", env.spawn_along_min);
  o.Read("spawn_along_max", env.spawn_along_max);
  o.Read("spawn_offset", env.spawn_offset);
  o.Read("goal_radius", env.goal_radius);
  o.Read("max_steps", env.max_steps);
  if (allow_seed) o.Read("seed", env.seed);
  o.Finish();
}

}  // namespace assist::internal

#endif  // ASSIST_SRC_JSON_UTIL_H_
