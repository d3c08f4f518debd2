#pragma once

/// @file server.hpp
/// @brief Session servers: newline-delimited JSON over TCP, and the same
/// envelopes over HTTP POST /api for browser clients.
///
/// Each TCP connection owns one session. HTTP clients name their session
/// with a "session" field in the envelope; the first request without one is
/// given a fresh session whose token comes back in the response.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <functional>
#include <list>
#include <thread>

#include <httplib.h>

#include "nodehack/protocol.hpp"

namespace nodehack {

struct ServeOptions {
  std::string host = "127.0.0.1";
  int port = 7878;                 // 0 picks a free port
  std::optional<int> http_port;    // 0 picks a free port
  std::optional<fs::path> ui_dir;  // static files served over HTTP at /
  std::optional<fs::path> load;    // snapshot every new session starts from
  std::optional<fs::path> save;    // snapshot written when a session ends
};

namespace detail {

inline bool send_all(int fd, std::string_view data) {
  while (!data.empty()) {
    ssize_t n = ::send(fd, data.data(), data.size(), MSG_NOSIGNAL);
    if (n <= 0) return false;
    data.remove_prefix(static_cast<std::size_t>(n));
  }
  return true;
}

}  // namespace detail

class SessionServer {
 public:
  SessionServer(std::shared_ptr<PuzzleCache> cache, ServeOptions opts) : cache_(std::move(cache)), opts_(std::move(opts)) {}
  ~SessionServer() { teardown(); }

  /// Binds the listening sockets. Returns the TCP port actually bound.
  int bind() {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    if (fd_ < 0) fail(ErrorCode::IoError, "socket() failed");
    int yes = 1;
    ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(opts_.port));
    if (::inet_pton(AF_INET, opts_.host.c_str(), &addr.sin_addr) != 1) fail(ErrorCode::IoError, "bad host " + opts_.host);
    if (::bind(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(fd_, 16) < 0)
      fail(ErrorCode::IoError, "cannot listen on " + opts_.host + ":" + std::to_string(opts_.port));
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    if (opts_.http_port) {
      setup_http();
      if (*opts_.http_port == 0)
        http_port_ = http_.bind_to_any_port(opts_.host);
      else
        http_port_ = http_.bind_to_port(opts_.host, *opts_.http_port) ? *opts_.http_port : -1;
      if (http_port_ < 0) fail(ErrorCode::IoError, "cannot listen for HTTP on port " + std::to_string(*opts_.http_port));
      http_thread_ = std::thread([this] { http_.listen_after_bind(); });
    }
    return port_;
  }

  int port() const { return port_; }
  int http_port() const { return http_port_; }

  /// Accepts connections until stop() is called or `stop_flag` becomes true,
  /// then closes every connection and returns.
  void run(const std::atomic<bool>* stop_flag = nullptr) {
    while (!stopping_ && !(stop_flag && *stop_flag)) {
      pollfd p{fd_, POLLIN, 0};
      if (::poll(&p, 1, 100) <= 0) continue;
      int client = ::accept(fd_, nullptr, nullptr);
      if (client < 0) continue;
      std::lock_guard lock(mu_);
      clients_.push_back(client);
      workers_.emplace_back([this, client] { serve_connection(client); });
    }
    teardown();
  }

  /// Asks run() to return; safe to call from any thread.
  void stop() { stopping_ = true; }

 private:
  void teardown() {
    stopping_ = true;
    if (torn_down_.exchange(true)) return;
    if (opts_.http_port) http_.stop();
    if (http_thread_.joinable()) http_thread_.join();
    {
      std::lock_guard lock(mu_);
      for (int c : clients_) ::shutdown(c, SHUT_RDWR);
    }
    for (auto& t : workers_)
      if (t.joinable()) t.join();
    workers_.clear();
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

  std::unique_ptr<ProtocolHandler> new_handler() {
    auto h = std::make_unique<ProtocolHandler>(cache_);
    if (opts_.load) {
      json snap = parse_json_text(read_text_file(*opts_.load), opts_.load->string());
      json resp = h->handle(json{{"id", "load"}, {"type", "restore"}, {"payload", {{"snapshot", snap}}}});
      if (resp["status"] != "ok") fail(ErrorCode::ParseError, resp["payload"]["message"].get<std::string>());
    }
    return h;
  }

  void save(ProtocolHandler& h) {
    if (!opts_.save || !h.has_session()) return;
    json resp = h.handle(json{{"id", "save"}, {"type", "save"}});
    if (resp["status"] == "ok") write_text_file(*opts_.save, canonical_text(resp["payload"]["snapshot"]));
  }

  void serve_connection(int client) {
    std::unique_ptr<ProtocolHandler> handler;
    std::string startup_error;
    try {
      handler = new_handler();
    } catch (const Error& e) {
      handler = std::make_unique<ProtocolHandler>(cache_);
      startup_error = e.what();
    }
    if (!startup_error.empty())
      detail::send_all(client, compact_text(json{{"id", nullptr}, {"type", "restore"}, {"status", "error"},
                                                 {"payload", {{"code", "IoError"}, {"message", startup_error}}}}) + "\n");
    std::string buffer;
    char chunk[4096];
    for (;;) {
      ssize_t n = ::recv(client, chunk, sizeof chunk, 0);
      if (n <= 0) break;
      buffer.append(chunk, static_cast<std::size_t>(n));
      std::size_t nl;
      bool ok = true;
      while (ok && (nl = buffer.find('\n')) != std::string::npos) {
        std::string line = buffer.substr(0, nl);
        buffer.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        ok = detail::send_all(client, handler->handle_line(line) + "\n");
      }
      if (!ok) break;
    }
    try {
      save(*handler);
    } catch (const Error&) {
    }
    std::lock_guard lock(mu_);
    clients_.remove(client);
    ::close(client);
  }

  void setup_http() {
    http_.Post("/api", [this](const httplib::Request& req, httplib::Response& res) {
      std::shared_ptr<ProtocolHandler> handler;
      std::string token;
      json request;
      try {
        request = parse_json_text(req.body, "request");
      } catch (const Error&) {
      }
      {
        std::lock_guard lock(mu_);
        if (request.is_object() && request.contains("session") && request["session"].is_string())
          token = request["session"].get<std::string>();
        auto it = http_sessions_.find(token);
        if (it == http_sessions_.end()) {
          if (token.empty()) token = "s" + std::to_string(++http_counter_);
          try {
            handler = std::shared_ptr<ProtocolHandler>(new_handler());
          } catch (const Error&) {
            handler = std::make_shared<ProtocolHandler>(cache_);
          }
          http_sessions_[token] = handler;
        } else {
          handler = it->second;
        }
      }
      json resp = request.is_null() ? parse_json_text(handler->handle_line(req.body), "response") : handler->handle(request);
      resp["session"] = token;
      res.set_content(compact_text(resp), "application/json");
    });
    if (opts_.ui_dir && !http_.set_mount_point("/", opts_.ui_dir->string()))
      fail(ErrorCode::IoError, "cannot serve UI from " + opts_.ui_dir->string());
  }

  std::shared_ptr<PuzzleCache> cache_;
  ServeOptions opts_;
  int fd_ = -1;
  int port_ = 0;
  int http_port_ = -1;
  std::atomic<bool> stopping_{false};
  std::atomic<bool> torn_down_{false};
  std::mutex mu_;
  std::list<int> clients_;
  std::vector<std::thread> workers_;
  httplib::Server http_;
  std::thread http_thread_;
  std::map<std::string, std::shared_ptr<ProtocolHandler>> http_sessions_;
  int http_counter_ = 0;
};

}  // namespace nodehack
