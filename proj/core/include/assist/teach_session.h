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

#ifndef ASSIST_TEACH_SESSION_H_
#define ASSIST_TEACH_SESSION_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "assist/data_pipeline.h"
#include "assist/maze_env.h"

namespace assist {

inline constexpr int kTeachProtocolVersion = 1;

// One human teaching session, independent of any transport. Messages are
// JSON text frames.
//
// Client -> server
//   {"type":"hello","protocol_version":1}
//   {"type":"intervene","active":true,"u":[vx,vy]}   (world units/step)
//   {"type":"intervene","active":false}
//   {"type":"reset"}
// Server -> client
//   {"type":"hello","protocol_version":1,"session_id":..}
//   {"type":"state","t":..,"agent":[x,y],"obstacle":[x,y],"goal":[x,y],
//    "p":0|1,"status":"running"|"reached_goal"|"collided"|"done"}
//   {"type":"episode_end","success":bool,"steps":..}
//   {"type":"error","message":..}
//
// Each tick executes the held human command while intervention is active
// and the straight-line nominal command otherwise, recording p = 1 exactly
// on intervention ticks. Touching the obstacle ends the episode as failed.
class TeachSession {
 public:
  TeachSession(std::string session_id, EnvConfig env, std::uint64_t base_seed);

  // Returns the replies to send, in order. Malformed messages produce one
  // error reply and leave the session unchanged.
  std::vector<std::string> HandleMessage(std::string_view text);

  // Advances the running episode by one step. Returns the outbound state
  // message and, on a terminal step, the episode_end message. Does nothing
  // when no episode is running.
  std::vector<std::string> Tick();

  // A successful episode waiting to be persisted, if any.
  std::optional<Episode> TakeFinishedEpisode();

  bool handshake_done() const { return handshake_done_; }
  bool running() const { return running_; }
  bool intervention_active() const { return intervention_active_; }
  const EnvState& env_state() const { return state_; }
  const Episode& episode() const { return episode_; }
  const std::string& session_id() const { return session_id_; }

 private:
  void StartEpisode();
  std::string StateMessage() const;
  std::string StatusText() const;

  std::string session_id_;
  EnvConfig env_;
  std::uint64_t base_seed_;
  int episodes_started_ = 0;
  bool handshake_done_ = false;
  bool running_ = false;
  bool intervention_active_ = false;
  Vec2 pending_u_ = Vec2::Zero();
  double last_p_ = 0.0;
  EnvState state_;
  Episode episode_;
  std::optional<Episode> finished_;
};

}  // namespace assist

#endif  // ASSIST_TEACH_SESSION_H_
