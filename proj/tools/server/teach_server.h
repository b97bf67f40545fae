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

// HTTP + WebSocket endpoint for human teaching sessions.
//
//   GET /health   {"status":"ok","protocol_version":1,"episodes_written":n}
//   GET /ws       WebSocket upgrade; text frames follow TeachSession's protocol
//   GET /<path>   static asset from `static_dir` ("/" maps to index.html)
//
// Every WebSocket connection owns one TeachSession and its own tick timer.
// Successful episodes go to the shared DatasetAppender. Everything runs on
// one io_context thread.

#ifndef ASSIST_TOOLS_SERVER_TEACH_SERVER_H_
#define ASSIST_TOOLS_SERVER_TEACH_SERVER_H_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>

#include "assist/dataset_io.h"
#include "assist/maze_env.h"

namespace assist::server {

struct TeachServerOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  double tick_rate_hz = 10.0;
  std::filesystem::path static_dir;  // empty: no static assets
  EnvConfig env;
  std::uint64_t seed = 0;
};

class TeachServer {
 public:
  TeachServer(TeachServerOptions options, DatasetAppender& appender);
  ~TeachServer();
  TeachServer(const TeachServer&) = delete;
  TeachServer& operator=(const TeachServer&) = delete;

  // Binds the listening socket and returns the bound port. Throws
  // std::system_error when the address is unavailable (port in use).
  unsigned short Listen();

  // Serves until Stop() is called.
  void Run();

  // Safe to call from any thread.
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Content type for a static asset, by extension.
std::string_view MimeType(const std::filesystem::path& path);

}  // namespace assist::server

#endif  // ASSIST_TOOLS_SERVER_TEACH_SERVER_H_
