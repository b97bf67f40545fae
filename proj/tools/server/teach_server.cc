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

#include "teach_server.h"

#include <atomic>
#include <chrono>
#include <deque>
#include <fstream>
#include <iterator>
#include <system_error>

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <fmt/format.h>

#include "assist/errors.h"
#include "assist/seeding.h"
#include "assist/teach_session.h"

namespace assist::server {
namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

struct Shared {
  TeachServerOptions options;
  DatasetAppender& appender;
  std::uint64_t sessions_opened = 0;
};

void LogError(std::string_view where, const beast::error_code& ec) {
  if (ec == net::error::operation_aborted || ec == websocket::error::closed ||
      ec == http::error::end_of_stream || ec == net::error::eof) {
    return;
  }
  fmt::print(stderr, "teach_server: {}: {}\n", where, ec.message());
}

class WsSession : public std::enable_shared_from_this<WsSession> {
 public:
  WsSession(tcp::socket&& socket, Shared& shared)
      : ws_(std::move(socket)),
        timer_(ws_.get_executor()),
        shared_(shared),
        session_(fmt::format("session-{}", shared.sessions_opened),
                 shared.options.env,
                 DeriveSeed(shared.options.seed, kStreamServe,
                            shared.sessions_opened)) {
    ++shared.sessions_opened;
    period_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / shared.options.tick_rate_hz));
  }

  void Start(http::request<http::string_body> request) {
    ws_.set_option(
        websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request, beast::bind_front_handler(&WsSession::OnAccept,
                                                        shared_from_this()));
  }

 private:
  void OnAccept(beast::error_code ec) {
    if (ec) return LogError("websocket accept", ec);
    ws_.text(true);
    DoRead();
    ScheduleTick();
  }

  void DoRead() {
    ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::OnRead,
                                                      shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec) {
      Close();
      return LogError("websocket read", ec);
    }
    const std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    for (std::string& reply : session_.HandleMessage(text)) {
      Send(std::move(reply));
    }
    DoRead();
  }

  void ScheduleTick() {
    timer_.expires_after(period_);
    timer_.async_wait(
        beast::bind_front_handler(&WsSession::OnTick, shared_from_this()));
  }

  void OnTick(beast::error_code ec) {
    if (ec || closed_) return;
    std::vector<std::string> messages = session_.Tick();
    // Store before sending episode_end so clients never observe the end of
    // an episode that is not yet on disk.
    if (std::optional<Episode> episode = session_.TakeFinishedEpisode()) {
      try {
        const int id = shared_.appender.Append(std::move(*episode));
        fmt::print(stderr, "teach_server: {} stored episode {}\n",
                   session_.session_id(), id);
      } catch (const Error& e) {
        fmt::print(stderr, "teach_server: {}\n", e.what());
        Send(fmt::format(R"({{"type":"error","message":"{}"}})",
                         "episode could not be stored"));
      }
    }
    for (std::string& message : messages) Send(std::move(message));
    ScheduleTick();
  }

  void Send(std::string message) {
    if (closed_) return;
    queue_.push_back(std::move(message));
    if (queue_.size() == 1) DoWrite();
  }

  void DoWrite() {
    ws_.async_write(net::buffer(queue_.front()),
                    beast::bind_front_handler(&WsSession::OnWrite,
                                              shared_from_this()));
  }

  void OnWrite(beast::error_code ec, std::size_t) {
    if (ec) {
      Close();
      return LogError("websocket write", ec);
    }
    queue_.pop_front();
    if (!queue_.empty()) DoWrite();
  }

  void Close() {
    closed_ = true;
    timer_.cancel();
  }

  websocket::stream<beast::tcp_stream> ws_;
  net::steady_timer timer_;
  Shared& shared_;
  TeachSession session_;
  std::chrono::steady_clock::duration period_;
  beast::flat_buffer buffer_;
  std::deque<std::string> queue_;
  bool closed_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
 public:
  HttpSession(tcp::socket&& socket, Shared& shared)
      : stream_(std::move(socket)), shared_(shared) {}

  void Start() { DoRead(); }

 private:
  void DoRead() {
    request_ = {};
    stream_.expires_after(std::chrono::seconds(30));
    http::async_read(stream_, buffer_, request_,
                     beast::bind_front_handler(&HttpSession::OnRead,
                                               shared_from_this()));
  }

  void OnRead(beast::error_code ec, std::size_t) {
    if (ec) return LogError("http read", ec);
    if (websocket::is_upgrade(request_)) {
      if (request_.target() != "/ws") return Reply(NotFound());
      stream_.expires_never();
      std::make_shared<WsSession>(stream_.release_socket(), shared_)
          ->Start(std::move(request_));
      return;
    }
    Reply(Respond());
  }

  http::response<http::string_body> Make(http::status status,
                                         std::string_view type,
                                         std::string body) const {
    http::response<http::string_body> res{status, request_.version()};
    res.set(http::field::server, "assist-teach");
    res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
    res.keep_alive(request_.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
  }

  http::response<http::string_body> NotFound() const {
    return Make(http::status::not_found, "text/plain", "not found\n");
  }

  http::response<http::string_body> Respond() const {
    if (request_.method() != http::verb::get &&
        request_.method() != http::verb::head) {
      return Make(http::status::method_not_allowed, "text/plain",
                  "method not allowed\n");
    }
    const std::string target(request_.target());
    if (target == "/health") {
      return Make(http::status::ok, "application/json",
                  fmt::format(R"({{"status":"ok","protocol_version":{},)"
                              R"("episodes_written":{}}})",
                              kTeachProtocolVersion,
                              shared_.appender.episodes_written()));
    }
    const std::filesystem::path& root = shared_.options.static_dir;
    if (root.empty() || target.empty() || target[0] != '/' ||
        target.find("..") != std::string::npos ||
        target.find('?') != std::string::npos) {
      return NotFound();
    }
    std::filesystem::path file = root / target.substr(1);
    if (target == "/") file = root / "index.html";
    std::error_code fs_ec;
    if (!std::filesystem::is_regular_file(file, fs_ec)) return NotFound();
    std::ifstream in(file, std::ios::binary);
    std::string body((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return Make(http::status::ok, MimeType(file), std::move(body));
  }

  void Reply(http::response<http::string_body> res) {
    auto owned = std::make_shared<http::response<http::string_body>>(
        std::move(res));
    http::async_write(stream_, *owned,
                      [self = shared_from_this(), owned](
                          beast::error_code ec, std::size_t) {
                        if (ec) return LogError("http write", ec);
                        if (owned->need_eof()) {
                          beast::error_code ignored;
                          self->stream_.socket().shutdown(
                              tcp::socket::shutdown_send, ignored);
                          return;
                        }
                        self->DoRead();
                      });
  }

  beast::tcp_stream stream_;
  Shared& shared_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
};

}  // namespace

std::string_view MimeType(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".html" || ext == ".htm") return "text/html; charset=utf-8";
  if (ext == ".js" || ext == ".mjs") return "text/javascript; charset=utf-8";
  if (ext == ".css") return "text/css; charset=utf-8";
  if (ext == ".json" || ext == ".map") return "application/json";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".png") return "image/png";
  if (ext == ".ico") return "image/x-icon";
  if (ext == ".txt") return "text/plain; charset=utf-8";
  return "application/octet-stream";
}

struct TeachServer::Impl {
  Impl(TeachServerOptions options, DatasetAppender& appender)
      : shared{std::move(options), appender}, acceptor(ioc) {}

  void DoAccept() {
    acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec,
                                                        tcp::socket socket) {
      if (ec) {
        if (ec != net::error::operation_aborted) LogError("accept", ec);
        if (!acceptor.is_open()) return;
      } else {
        std::make_shared<HttpSession>(std::move(socket), shared)->Start();
      }
      DoAccept();
    });
  }

  net::io_context ioc{1};
  Shared shared;
  tcp::acceptor acceptor;
};

TeachServer::TeachServer(TeachServerOptions options, DatasetAppender& appender)
    : impl_(std::make_unique<Impl>(std::move(options), appender)) {
  impl_->shared.options.env.Validate();
  if (!(impl_->shared.options.tick_rate_hz > 0.0)) {
    throw ContractError("teach server: tick rate must be positive");
  }
}

TeachServer::~TeachServer() = default;

unsigned short TeachServer::Listen() {
  const auto address = net::ip::make_address(impl_->shared.options.address);
  const tcp::endpoint endpoint(address, impl_->shared.options.port);
  tcp::acceptor& acceptor = impl_->acceptor;
  try {
    acceptor.open(endpoint.protocol());
    acceptor.set_option(net::socket_base::reuse_address(true));
    acceptor.bind(endpoint);
    acceptor.listen(net::socket_base::max_listen_connections);
  } catch (const boost::system::system_error& e) {
    beast::error_code ignored;
    acceptor.close(ignored);
    throw std::system_error(e.code().value(), std::generic_category(),
                            fmt::format("teach server: cannot listen on {}:{}",
                                        endpoint.address().to_string(),
                                        endpoint.port()));
  }
  impl_->DoAccept();
  return acceptor.local_endpoint().port();
}

void TeachServer::Run() { impl_->ioc.run(); }

void TeachServer::Stop() { impl_->ioc.stop(); }

}  // namespace assist::server
