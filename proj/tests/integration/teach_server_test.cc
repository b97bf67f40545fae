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

#include "server/teach_server.h"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <string>
#include <thread>

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "assist/dataset_io.h"

namespace assist::server {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;
using nlohmann::json;

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("assist_server_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter_++));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  const std::filesystem::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  std::filesystem::path path_;
};

// Runs a server on an ephemeral port for the lifetime of the fixture.
class RunningServer {
 public:
  RunningServer(TeachServerOptions options, const std::filesystem::path& file)
      : appender_(file, Header(options.env)),
        server_(std::move(options), appender_) {
    port_ = server_.Listen();
    thread_ = std::thread([this] { server_.Run(); });
  }
  ~RunningServer() {
    server_.Stop();
    thread_.join();
  }
  unsigned short port() const { return port_; }
  const DatasetAppender& appender() const { return appender_; }

 private:
  static DatasetHeader Header(const EnvConfig& env) {
    DatasetHeader header;
    header.env = env;
    return header;
  }
  DatasetAppender appender_;
  TeachServer server_;
  unsigned short port_ = 0;
  std::thread thread_;
};

http::response<http::string_body> Get(unsigned short port,
                                      const std::string& target) {
  net::io_context ioc;
  beast::tcp_stream stream(ioc);
  stream.connect(tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
  http::request<http::string_body> req{http::verb::get, target, 11};
  req.set(http::field::host, "127.0.0.1");
  http::write(stream, req);
  beast::flat_buffer buffer;
  http::response<http::string_body> res;
  http::read(stream, buffer, res);
  beast::error_code ec;
  stream.socket().shutdown(tcp::socket::shutdown_both, ec);
  return res;
}

class WsClient {
 public:
  explicit WsClient(unsigned short port) : ws_(ioc_) {
    beast::get_lowest_layer(ws_).connect(
        tcp::endpoint(net::ip::make_address("127.0.0.1"), port));
    ws_.handshake("127.0.0.1", "/ws");
    ws_.text(true);
  }
  void Send(const std::string& text) { ws_.write(net::buffer(text)); }
  json Read() {
    beast::flat_buffer buffer;
    ws_.read(buffer);
    return json::parse(beast::buffers_to_string(buffer.data()));
  }
  // Reads until an episode_end arrives; returns it.
  json ReadUntilEnd() {
    while (true) {
      json m = Read();
      if (m["type"] == "episode_end") return m;
    }
  }

 private:
  net::io_context ioc_;
  websocket::stream<beast::tcp_stream> ws_;
};

TeachServerOptions FastOptions(const EnvConfig& env) {
  TeachServerOptions options;
  options.port = 0;
  options.tick_rate_hz = 500.0;
  options.env = env;
  options.seed = 3;
  return options;
}

TEST(TeachServerTest, HealthAndStaticAssets) {
  TempDir dir;
  std::filesystem::create_directories(dir.path() / "www");
  std::ofstream(dir.path() / "www" / "index.html") << "<html>teach</html>";
  std::ofstream(dir.path() / "www" / "app.js") << "console.log(1);";
  std::ofstream(dir.path() / "secret.txt") << "hidden";
  TeachServerOptions options = FastOptions(EnvConfig{});
  options.static_dir = dir.path() / "www";
  RunningServer server(options, dir.path() / "data.jsonl");

  const auto health = Get(server.port(), "/health");
  EXPECT_EQ(health.result(), http::status::ok);
  const json body = json::parse(health.body());
  EXPECT_EQ(body["status"], "ok");
  EXPECT_EQ(body["protocol_version"], 1);
  EXPECT_EQ(body["episodes_written"], 0);

  const auto index = Get(server.port(), "/");
  EXPECT_EQ(index.result(), http::status::ok);
  EXPECT_EQ(index.body(), "<html>teach</html>");
  EXPECT_EQ(index[http::field::content_type], "text/html; charset=utf-8");
  const auto js = Get(server.port(), "/app.js");
  EXPECT_EQ(js.body(), "console.log(1);");
  EXPECT_EQ(js[http::field::content_type], "text/javascript; charset=utf-8");

  EXPECT_EQ(Get(server.port(), "/../secret.txt").result(),
            http::status::not_found);
  EXPECT_EQ(Get(server.port(), "/%2e%2e/secret.txt").result(),
            http::status::not_found);
  EXPECT_EQ(Get(server.port(), "/missing.html").result(),
            http::status::not_found);
}

TEST(TeachServerTest, SuccessfulEpisodeIsAppended) {
  TempDir dir;
  EnvConfig env;
  env.obstacle_bias = 0.0;
  env.obstacle_noise = 0.0;
  env.spawn_offset = 40.0;
  const auto file = dir.path() / "data.jsonl";
  RunningServer server(FastOptions(env), file);

  WsClient client(server.port());
  client.Send(R"({"type":"hello","protocol_version":1})");
  const json hello = client.Read();
  ASSERT_EQ(hello["type"], "hello");
  EXPECT_EQ(hello["protocol_version"], 1);

  // Follow the nominal path; retry until a game succeeds.
  int successes = 0;
  for (int attempt = 0; attempt < 20 && successes == 0; ++attempt) {
    const json end = client.ReadUntilEnd();
    if (end["success"] == true) {
      ++successes;
    } else {
      client.Send(R"({"type":"reset"})");
    }
  }
  ASSERT_EQ(successes, 1);
  EXPECT_EQ(server.appender().episodes_written(), 1);
  const json health = json::parse(Get(server.port(), "/health").body());
  EXPECT_EQ(health["episodes_written"], 1);

  const Dataset stored = LoadDataset(file);
  ASSERT_EQ(stored.episodes.size(), 1u);
  const Episode& episode = stored.episodes[0];
  EXPECT_EQ(episode.meta.source, EpisodeSource::kHuman);
  // The stored actions replay to the goal.
  EnvState s = Reset(env, episode.meta.seed);
  for (const StepVector& step : episode.steps) {
    ASSERT_EQ(step.s.head<2>(), s.agent);
    s = Step(s, step.u, env);
  }
  EXPECT_EQ(s.status, EnvStatus::kReachedGoal);
}

TEST(TeachServerTest, FailedEpisodeIsNotAppended) {
  TempDir dir;
  EnvConfig env;
  env.obstacle_bias = 1.0;
  env.obstacle_noise = 0.0;
  env.obstacle_speed = 3.0;
  const auto file = dir.path() / "data.jsonl";
  RunningServer server(FastOptions(env), file);

  WsClient client(server.port());
  client.Send(R"({"type":"hello","protocol_version":1})");
  ASSERT_EQ(client.Read()["type"], "hello");
  const json end = client.ReadUntilEnd();
  EXPECT_EQ(end["success"], false);
  EXPECT_EQ(server.appender().episodes_written(), 0);
  EXPECT_TRUE(LoadDataset(file).episodes.empty());
}

TEST(TeachServerTest, MalformedMessageKeepsSession) {
  TempDir dir;
  RunningServer server(FastOptions(EnvConfig{}), dir.path() / "d.jsonl");
  WsClient client(server.port());
  client.Send("not json");
  EXPECT_EQ(client.Read()["type"], "error");
  client.Send(R"({"type":"hello","protocol_version":1})");
  EXPECT_EQ(client.Read()["type"], "hello");
}

TEST(TeachServerTest, PortInUseIsAnError) {
  TempDir dir;
  RunningServer first(FastOptions(EnvConfig{}), dir.path() / "a.jsonl");
  DatasetAppender appender(dir.path() / "b.jsonl", DatasetHeader{});
  TeachServerOptions options = FastOptions(EnvConfig{});
  options.port = first.port();
  TeachServer second(options, appender);
  EXPECT_THROW(second.Listen(), std::system_error);
}

TEST(TeachServerTest, ServesTheBrowserClient) {
  TempDir dir;
  TeachServerOptions options = FastOptions(EnvConfig{});
  options.static_dir = ASSIST_TEACH_UI_DIR;
  RunningServer server(options, dir.path() / "d.jsonl");
  const auto page = Get(server.port(), "/");
  EXPECT_EQ(page.result(), http::status::ok);
  EXPECT_NE(page.body().find(R"(<canvas id="world")"), std::string::npos);
  EXPECT_NE(page.body().find("dist/src/main.js"), std::string::npos);
}

TEST(TeachServerTest, MimeTypes) {
  EXPECT_EQ(MimeType("a/b.css"), "text/css; charset=utf-8");
  EXPECT_EQ(MimeType("x.bin"), "application/octet-stream");
}

}  // namespace
}  // namespace assist::server
