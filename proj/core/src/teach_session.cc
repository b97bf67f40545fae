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

#include "assist/teach_session.h"

#include <fmt/format.h>

#include <nlohmann/json.hpp>

#include "assist/seeding.h"

namespace assist {
namespace {

using Json = nlohmann::ordered_json;

std::string ErrorMessage(std::string_view message) {
  Json j;
  j["type"] = "error";
  j["message"] = message;
  return j.dump();
}

Json ToArray(const Vec2& v) { return Json::array({v.x(), v.y()}); }

}  // namespace

TeachSession::TeachSession(std::string session_id, EnvConfig env,
                           std::uint64_t base_seed)
    : session_id_(std::move(session_id)),
      env_(std::move(env)),
      base_seed_(base_seed) {
  env_.Validate();
}

void TeachSession::StartEpisode() {
  const std::uint64_t seed =
      DeriveSeed(base_seed_, kStreamServe, episodes_started_++);
  state_ = Reset(env_, seed);
  episode_ = Episode{};
  episode_.meta.seed = seed;
  episode_.meta.source = EpisodeSource::kHuman;
  intervention_active_ = false;
  pending_u_.setZero();
  last_p_ = 0.0;
  running_ = !state_.collided_ever;
}

std::string TeachSession::StatusText() const {
  if (state_.collided_ever) return "collided";
  return std::string(ToString(state_.status));
}

std::string TeachSession::StateMessage() const {
  Json j;
  j["type"] = "state";
  j["t"] = state_.t;
  j["agent"] = ToArray(state_.agent);
  j["obstacle"] = ToArray(state_.obstacle);
  j["goal"] = ToArray(env_.goal);
  j["p"] = last_p_;
  j["status"] = StatusText();
  return j.dump();
}

std::vector<std::string> TeachSession::HandleMessage(std::string_view text) {
  Json msg;
  try {
    msg = Json::parse(text);
  } catch (const nlohmann::json::exception&) {
    return {ErrorMessage("malformed message: not valid JSON")};
  }
  if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
    return {ErrorMessage("malformed message: missing string field 'type'")};
  }
  const std::string type = msg["type"].get<std::string>();

  if (type == "hello") {
    const auto it = msg.find("protocol_version");
    if (it == msg.end() || !it->is_number_integer() ||
        it->get<int>() != kTeachProtocolVersion) {
      return {ErrorMessage(fmt::format("unsupported protocol_version; server "
                                       "speaks {}",
                                       kTeachProtocolVersion))};
    }
    Json reply;
    reply["type"] = "hello";
    reply["protocol_version"] = kTeachProtocolVersion;
    reply["session_id"] = session_id_;
    std::vector<std::string> out{reply.dump()};
    if (!handshake_done_) {
      handshake_done_ = true;
      StartEpisode();
      out.push_back(StateMessage());
    }
    return out;
  }
  if (!handshake_done_) return {ErrorMessage("send hello first")};

  if (type == "reset") {
    StartEpisode();
    return {StateMessage()};
  }
  if (type == "intervene") {
    const auto active = msg.find("active");
    if (active == msg.end() || !active->is_boolean()) {
      return {ErrorMessage("intervene: 'active' must be a boolean")};
    }
    Vec2 u = Vec2::Zero();
    if (active->get<bool>()) {
      const auto it = msg.find("u");
      if (it == msg.end() || !it->is_array() || it->size() != 2 ||
          !(*it)[0].is_number() || !(*it)[1].is_number()) {
        return {ErrorMessage("intervene: 'u' must be [vx, vy]")};
      }
      u = Vec2((*it)[0].get<double>(), (*it)[1].get<double>());
      if (!u.allFinite()) return {ErrorMessage("intervene: 'u' not finite")};
    }
    intervention_active_ = active->get<bool>();
    pending_u_ = u;
    return {};
  }
  return {ErrorMessage(fmt::format("unknown message type '{}'", type))};
}

std::vector<std::string> TeachSession::Tick() {
  if (!running_) return {};
  const Vec2 u = intervention_active_
                     ? ClampNorm(pending_u_, env_.agent_max_speed)
                     : NominalInput(state_, env_);
  StepVector step;
  step.s << state_.agent, state_.obstacle;
  step.u = u;
  step.p = intervention_active_ ? 1.0 : 0.0;
  episode_.steps.push_back(step);
  last_p_ = step.p;
  state_ = Step(state_, u, env_);

  std::vector<std::string> out{StateMessage()};
  bool ended = false;
  bool success = false;
  if (state_.collided_ever) {
    ended = true;
    episode_.meta.outcome = EpisodeOutcome::kCollided;
  } else if (state_.status == EnvStatus::kReachedGoal) {
    ended = true;
    success = true;
    episode_.meta.outcome = EpisodeOutcome::kReachedGoal;
  } else if (state_.status == EnvStatus::kDone) {
    ended = true;
    episode_.meta.outcome = EpisodeOutcome::kTimedOut;
  }
  if (ended) {
    running_ = false;
    Json end;
    end["type"] = "episode_end";
    end["success"] = success;
    end["steps"] = state_.t;
    out.push_back(end.dump());
    if (success) finished_ = episode_;
  }
  return out;
}

std::optional<Episode> TeachSession::TakeFinishedEpisode() {
  std::optional<Episode> out = std::move(finished_);
  finished_.reset();
  return out;
}

}  // namespace assist
