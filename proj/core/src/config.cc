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

#include "assist/config.h"

#include <fstream>
#include <iterator>

#include "assist/errors.h"
#include "json_util.h"

namespace assist {
namespace internal {

Json EnvConfigToJson(const EnvConfig& env, bool with_seed) {
  Json j;
  j["world_size"] = env.world_size;
  j["start"] = Vec2ToJson(env.start);
  j["goal"] = Vec2ToJson(env.goal);
  j["agent_max_speed"] = env.agent_max_speed;
  j["agent_radius"] = env.agent_radius;
  j["obstacle_radius"] = env.obstacle_radius;
  j["obstacle_speed"] = env.obstacle_speed;
  j["obstacle_bias"] = env.obstacle_bias;
  j["obstacle_noise"] = env.obstacle_noise;
  j["spawn_along_min"] = env.spawn_along_min;
  j["spawn_along_max"] = env.spawn_along_max;
  j["spawn_offset"] = env.spawn_offset;
  j["goal_radius"] = env.goal_radius;
  j["max_steps"] = env.max_steps;
  if (with_seed) j["seed"] = env.seed;
  return j;
}

}  // namespace internal

namespace {

using internal::Json;
using Strict = internal::StrictObject<ConfigError>;

template <typename Fn>
void Section(Strict& parent, const char* key, Fn&& fn) {
  if (const Json* child = parent.Child(key)) {
    Strict o(*child, parent.where() + "." + key);
    fn(o);
    o.Finish();
  }
}

Eigen::Vector2d ToEigen(const Vec2& v) { return v; }

}  // namespace

void RunConfig::Materialize() {
  env.seed = seed;
  teacher.seed = seed;
  model.seed = seed;
  try {
    env.Validate();
    teacher.Validate();
    model.Validate();
    execution.opt.Validate();
  } catch (const ContractError& e) {
    throw ConfigError(e.what());
  }
  if (collect.n < 1) throw ConfigError("collect.n must be >= 1");
  if (eval.n_episodes < 1) throw ConfigError("eval.n_episodes must be >= 1");
  if (eval.conditions.empty()) throw ConfigError("eval.conditions is empty");
  if (pipeline.smooth_window < 1) {
    throw ConfigError("pipeline.smooth_window must be >= 1");
  }
  if (pipeline.filter_mask.size() != kStateDim) {
    throw ConfigError("pipeline.filter_mask needs 4 entries");
  }
  if (pipeline.augment_sigma < 0.0 || pipeline.augment_copies < 0) {
    throw ConfigError("pipeline augmentation values must be >= 0");
  }
  if (!(execution.abort_threshold > 0.0)) {
    throw ConfigError("optimizer.abort_threshold must be positive");
  }
  if (serve.port < 0 || serve.port > 65535 || !(serve.tick_rate_hz > 0.0)) {
    throw ConfigError("serve: invalid port or tick rate");
  }
}

RunConfig ParseRunConfig(std::string_view json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  RunConfig config;
  Strict o(root, "config");
  o.Read("seed", config.seed);
  if (const Json* env = o.Child("env")) {
    internal::EnvConfigFromJson<ConfigError>(*env, "config.env", config.env,
                                             /*allow_seed=*/false);
  }
  Section(o, "teacher", [&](Strict& s) {
    s.Read("danger_radius", config.teacher.danger_radius);
    s.Read("safe_radius", config.teacher.safe_radius);
    s.Read("evasion_blend", config.teacher.evasion_blend);
    s.Read("input_noise", config.teacher.input_noise);
    s.Read("noise_corr", config.teacher.noise_corr);
  });
  Section(o, "collect", [&](Strict& s) { s.Read("n", config.collect.n); });
  Section(o, "pipeline", [&](Strict& s) {
    s.Read("smooth_window", config.pipeline.smooth_window);
    s.Read("filter_mask", config.pipeline.filter_mask);
    s.Read("augment_sigma", config.pipeline.augment_sigma);
    s.Read("augment_copies", config.pipeline.augment_copies);
  });
  Section(o, "model", [&](Strict& s) {
    s.Read("hidden_dim", config.model.hidden_dim);
    s.Read("alpha_s", config.model.alpha.s);
    s.Read("alpha_u", config.model.alpha.u);
    s.Read("alpha_p", config.model.alpha.p);
    s.Read("lr", config.model.lr);
    s.Read("batch_size", config.model.batch_size);
    s.Read("epochs", config.model.epochs);
  });
  Section(o, "optimizer", [&](Strict& s) {
    OptConfig& opt = config.execution.opt;
    s.Read("step_size", opt.step_size);
    s.Read("iterations", opt.iterations);
    Vec2 u_min = opt.u_min, u_max = opt.u_max;
    s.ReadVec2("u_min", u_min);
    s.ReadVec2("u_max", u_max);
    opt.u_min = ToEigen(u_min);
    opt.u_max = ToEigen(u_max);
    s.Read("max_window", opt.max_window);
    s.Read("abort_enabled", config.execution.abort_enabled);
    s.Read("abort_threshold", config.execution.abort_threshold);
  });
  Section(o, "eval", [&](Strict& s) {
    s.Read("n_episodes", config.eval.n_episodes);
    std::vector<std::string> names;
    s.Read("conditions", names);
    if (!names.empty()) {
      config.eval.conditions.clear();
      for (const std::string& name : names) {
        try {
          config.eval.conditions.push_back(ParseCondition(name));
        } catch (const ContractError& e) {
          throw ConfigError(std::string("config.eval.conditions: ") + e.what());
        }
      }
    }
  });
  Section(o, "serve", [&](Strict& s) {
    s.Read("port", config.serve.port);
    s.Read("tick_rate_hz", config.serve.tick_rate_hz);
    s.Read("static_dir", config.serve.static_dir);
  });
  o.Finish();
  config.Materialize();
  return config;
}

RunConfig LoadRunConfig(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError(fmt::format("cannot read config '{}'", path.string()));
  }
  const std::string text((std::istreambuf_iterator<char>(in)),
                         std::istreambuf_iterator<char>());
  return ParseRunConfig(text);
}

std::string RunConfigToJson(const RunConfig& config) {
  Json j;
  j["seed"] = config.seed;
  j["env"] = internal::EnvConfigToJson(config.env, /*with_seed=*/false);
  j["teacher"] = {{"danger_radius", config.teacher.danger_radius},
                  {"safe_radius", config.teacher.safe_radius},
                  {"evasion_blend", config.teacher.evasion_blend},
                  {"input_noise", config.teacher.input_noise},
                  {"noise_corr", config.teacher.noise_corr}};
  j["collect"] = {{"n", config.collect.n}};
  j["pipeline"] = {{"smooth_window", config.pipeline.smooth_window},
                   {"filter_mask", config.pipeline.filter_mask},
                   {"augment_sigma", config.pipeline.augment_sigma},
                   {"augment_copies", config.pipeline.augment_copies}};
  j["model"] = {{"hidden_dim", config.model.hidden_dim},
                {"alpha_s", config.model.alpha.s},
                {"alpha_u", config.model.alpha.u},
                {"alpha_p", config.model.alpha.p},
                {"lr", config.model.lr},
                {"batch_size", config.model.batch_size},
                {"epochs", config.model.epochs}};
  const OptConfig& opt = config.execution.opt;
  j["optimizer"] = {{"step_size", opt.step_size},
                    {"iterations", opt.iterations},
                    {"u_min", internal::Vec2ToJson(opt.u_min)},
                    {"u_max", internal::Vec2ToJson(opt.u_max)},
                    {"max_window", opt.max_window},
                    {"abort_enabled", config.execution.abort_enabled},
                    {"abort_threshold", config.execution.abort_threshold}};
  Json conditions = Json::array();
  for (Condition c : config.eval.conditions) conditions.push_back(ToString(c));
  j["eval"] = {{"n_episodes", config.eval.n_episodes},
               {"conditions", conditions}};
  j["serve"] = {{"port", config.serve.port},
                {"tick_rate_hz", config.serve.tick_rate_hz},
                {"static_dir", config.serve.static_dir}};
  return j.dump();
}

}  // namespace assist
