#pragma once

/// @file protocol.hpp
/// @brief Session message protocol shared by the socket and HTTP servers.
///
/// Request:  {"id": any, "type": kind, "payload": {...}}
/// Response: {"id": same, "type": kind, "status": "ok"|"error", "payload": {...}}
/// Error payloads are {"code": ErrorCode name, "message": text}.
///
/// Kinds and payloads:
///   list_puzzles  {}                         -> {"puzzles": [{id, title, prose}]}
///   load_puzzle   {"id": n}                  -> state
///   get_state     {}                         -> state
///   apply_edit    {"op": ..., "args": {...}} -> state
///   tick          {"count": n = 1}           -> {"records": [...], "state": state}
///   run_until     {"max_ticks": n}           -> {"records": [...], "state": state}
///   inspect_node  {"node": id, "port": p?}   -> inspection
///   reset         {"clear_edits": bool}      -> state
///   save          {}                         -> {"snapshot": ...}
///   restore       {"snapshot": ...}          -> state

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "nodehack/pack.hpp"

namespace nodehack {

/// Thread-safe cache of validated puzzles for one puzzle root.
class PuzzleCache {
 public:
  explicit PuzzleCache(fs::path root) : root_(std::move(root)) {}

  const fs::path& root() const { return root_; }

  std::shared_ptr<const PuzzleSpec> get(int id) {
    std::lock_guard lock(mu_);
    auto it = specs_.find(id);
    if (it != specs_.end()) return it->second;
    auto spec = load_puzzle(root_, id);
    specs_[id] = spec;
    return spec;
  }

  std::vector<PuzzleSummary> list() {
    std::lock_guard lock(mu_);
    return list_puzzles(root_);
  }

 private:
  fs::path root_;
  std::mutex mu_;
  std::map<int, std::shared_ptr<const PuzzleSpec>> specs_;
};

/// One client's protocol state. Calls are serialized by an internal mutex.
class ProtocolHandler {
 public:
  explicit ProtocolHandler(std::shared_ptr<PuzzleCache> cache) : cache_(std::move(cache)) {}

  /// Answers one request. Never throws.
  json handle(const json& request) {
    std::lock_guard lock(mu_);
    json id = nullptr;
    std::string type;
    try {
      if (request.is_object()) {
        if (auto it = request.find("id"); it != request.end()) id = *it;
        if (auto it = request.find("type"); it != request.end() && it->is_string()) type = it->get<std::string>();
      }
      Fields f(request, "request", {"id", "type", "payload", "session"});
      if (!f.has("id")) fail(ErrorCode::ProtocolError, "request.id: missing field");
      if (type.empty()) fail(ErrorCode::ProtocolError, "request.type: expected a message kind");
      json payload = f.has("payload") ? f.req("payload") : json::object();
      if (!payload.is_object()) fail(ErrorCode::ProtocolError, "request.payload: expected an object");
      return respond(id, type, "ok", dispatch(type, payload));
    } catch (const Error& e) {
      ErrorCode code = e.code() == ErrorCode::ParseError && type.empty() ? ErrorCode::ProtocolError : e.code();
      return respond(id, type, "error", json{{"code", std::string(to_string(code))}, {"message", e.detail()}});
    } catch (const std::exception& e) {
      return respond(id, type, "error", json{{"code", "ProtocolError"}, {"message", e.what()}});
    }
  }

  /// Answers one newline-delimited request line.
  std::string handle_line(std::string_view line) {
    json request;
    try {
      request = parse_json_text(line, "request");
    } catch (const Error& e) {
      return compact_text(respond(nullptr, "", "error", json{{"code", "ProtocolError"}, {"message", e.detail()}}));
    }
    return compact_text(handle(request));
  }

  bool has_session() const { return session_.has_value(); }

 private:
  static json respond(const json& id, const std::string& type, const std::string& status, json payload) {
    return json{{"id", id}, {"type", type}, {"status", status}, {"payload", std::move(payload)}};
  }

  Session& session() {
    if (!session_) fail(ErrorCode::ProtocolError, "no puzzle loaded; send load_puzzle first");
    return *session_;
  }

  static int count_field(const Fields& f, std::string_view key, int fallback) {
    if (!f.has(key)) return fallback;
    int n = f.integer(key);
    if (n < 0) fail(ErrorCode::ProtocolError, f.at(key) + ": expected a non-negative count");
    return n;
  }

  json records(std::vector<json> recs) {
    return json{{"records", std::move(recs)}, {"state", session_->state_json()}};
  }

  json dispatch(const std::string& type, const json& payload) {
    const std::string path = "payload";
    if (type == "list_puzzles") {
      Fields f(payload, path, {});
      json arr = json::array();
      for (const auto& p : cache_->list()) arr.push_back(json{{"id", p.id}, {"title", p.title}, {"prose", p.prose}});
      return json{{"puzzles", std::move(arr)}};
    }
    if (type == "load_puzzle") {
      Fields f(payload, path, {"id"});
      session_.emplace(cache_->get(f.integer("id")));
      return session_->state_json();
    }
    if (type == "get_state") {
      Fields f(payload, path, {});
      return session().state_json();
    }
    if (type == "apply_edit") {
      Edit e = edit_from_json(payload, path);
      session().apply_edit(e);
      return session_->state_json();
    }
    if (type == "tick") {
      Fields f(payload, path, {"count"});
      int n = count_field(f, "count", 1);
      Session& s = session();
      std::vector<json> recs;
      for (int i = 0; i < n; ++i) recs.push_back(s.tick());
      return records(std::move(recs));
    }
    if (type == "run_until") {
      Fields f(payload, path, {"max_ticks"});
      Session& s = session();
      return records(s.run_until(count_field(f, "max_ticks", s.spec().tick_limit)));
    }
    if (type == "inspect_node") {
      Fields f(payload, path, {"node", "port"});
      return inspection_to_json(session().inspect(f.str("node"), f.has("port") ? f.str("port") : std::string{}));
    }
    if (type == "reset") {
      Fields f(payload, path, {"clear_edits"});
      session().reset(f.has("clear_edits") && f.boolean("clear_edits"));
      return session_->state_json();
    }
    if (type == "save") {
      Fields f(payload, path, {});
      return json{{"snapshot", session().snapshot()}};
    }
    if (type == "restore") {
      Fields f(payload, path, {"snapshot"});
      const json& snap = f.req("snapshot");
      if (!snap.is_object() || !snap.contains("puzzle") || !snap["puzzle"].is_number_integer())
        fail(ErrorCode::ParseError, f.at("snapshot") + ".puzzle: expected integer");
      session_.emplace(Session::restore(cache_->get(snap["puzzle"].get<int>()), snap));
      return session_->state_json();
    }
    fail(ErrorCode::ProtocolError, "unknown message type '" + type + "'");
  }

  std::shared_ptr<PuzzleCache> cache_;
  std::mutex mu_;
  std::optional<Session> session_;
};

}  // namespace nodehack
