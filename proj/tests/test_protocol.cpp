#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "fixtures.hpp"
#include "nodehack/server.hpp"

#ifndef NODEHACK_UI_FIXTURE
#define NODEHACK_UI_FIXTURE "ui_fixture"
#endif

using namespace nodehack;

namespace {

std::shared_ptr<PuzzleCache> cache() { return std::make_shared<PuzzleCache>(fixtures::puzzles()); }

json request(json id, std::string type, json payload = json::object()) {
  return json{{"id", std::move(id)}, {"type", std::move(type)}, {"payload", std::move(payload)}};
}

json connect_args(std::string from, std::string from_port, std::string to, std::string to_port) {
  return json{{"op", "connect"}, {"args", {{"from", {from, from_port}}, {"to", {to, to_port}}}}};
}

// Runs a server on ephemeral ports for the lifetime of the object.
struct RunningServer {
  explicit RunningServer(ServeOptions opts) : server(cache(), std::move(opts)) {
    port = server.bind();
    thread = std::thread([this] { server.run(); });
  }
  ~RunningServer() {
    server.stop();
    thread.join();
  }
  SessionServer server;
  int port = 0;
  std::thread thread;
};

ServeOptions ephemeral() {
  ServeOptions o;
  o.port = 0;
  return o;
}

// Minimal line-oriented TCP client.
class LineClient {
 public:
  explicit LineClient(int port) {
    fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(static_cast<uint16_t>(port));
    ::inet_pton(AF_INET, "127.0.0.1", &addr.sin_addr);
    connected_ = ::connect(fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) == 0;
  }
  ~LineClient() { close(); }
  void close() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }
  bool connected() const { return connected_; }

  void send(const std::string& line) { detail::send_all(fd_, line + "\n"); }

  std::string read_line() {
    for (;;) {
      if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        return line;
      }
      char chunk[4096];
      ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
      if (n <= 0) return {};
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  json call(const json& req) {
    send(compact_text(req));
    return json::parse(read_line());
  }

 private:
  int fd_ = -1;
  bool connected_ = false;
  std::string buffer_;
};

}  // namespace

TEST(Protocol, LoadAndGetState) {
  ProtocolHandler h(cache());
  json r = h.handle(request(1, "load_puzzle", {{"id", 1}}));
  ASSERT_EQ(r["status"], "ok") << r.dump();
  json s = h.handle(request(2, "get_state"))["payload"];
  EXPECT_EQ(s["puzzle"]["id"], 1);
  EXPECT_EQ(s["view"]["door1"]["open"]["value"], false);
  EXPECT_EQ(s["solved"], false);
  EXPECT_EQ(s["program"], program_body_to_json(fixtures::puzzle(1)->initial_program()));
}

TEST(Protocol, EditAndTickSolves) {
  ProtocolHandler h(cache());
  h.handle(request(1, "load_puzzle", {{"id", 1}}));
  json e = h.handle(request(2, "apply_edit", connect_args("true", "out", "door", "open")));
  ASSERT_EQ(e["status"], "ok") << e.dump();
  // The tube is healthy before any tick.
  for (const auto& t : e["payload"]["eval"]["tube_states"]) EXPECT_EQ(t["state"], "normal");
  json t = h.handle(request(3, "tick", {{"count", 2}}));
  ASSERT_EQ(t["status"], "ok");
  EXPECT_EQ(t["payload"]["records"].size(), 2u);
  json s = h.handle(request(4, "get_state"))["payload"];
  EXPECT_EQ(s["solved"], true);
  EXPECT_EQ(s["view"]["door1"]["open"]["value"], true);
  json insp = h.handle(request(5, "inspect_node", {{"node", "door"}, {"port", "open"}}));
  EXPECT_EQ(insp["payload"]["value"], value_to_json(make_bool(true))) << insp.dump();
}

TEST(Protocol, ForbiddenEditLeavesSessionIntact) {
  ProtocolHandler h(cache());
  h.handle(request(1, "load_puzzle", {{"id", 3}}));
  json before = h.handle(request(2, "get_state"))["payload"];
  json r = h.handle(request(3, "apply_edit",
                            {{"op", "set_constant"}, {"args", {{"node", "k1"}, {"value", value_to_json(make_number(1))}}}}));
  EXPECT_EQ(r["status"], "error");
  EXPECT_EQ(r["payload"]["code"], "ForbiddenEdit");
  r = h.handle(request(4, "apply_edit", {{"op", "delete_node"}, {"args", {{"node", "k1"}}}}));
  EXPECT_EQ(r["payload"]["code"], "ForbiddenEdit");
  EXPECT_EQ(h.handle(request(5, "get_state"))["payload"], before);
}

TEST(Protocol, Errors) {
  ProtocolHandler h(cache());
  EXPECT_EQ(h.handle(request(1, "get_state"))["payload"]["code"], "ProtocolError");
  EXPECT_EQ(h.handle(request(2, "dance"))["payload"]["code"], "ProtocolError");
  EXPECT_EQ(h.handle(request(3, "load_puzzle", {{"id", 18}}))["payload"]["code"], "UnknownPuzzle");
  EXPECT_EQ(h.handle(request(4, "load_puzzle", {{"id", 1}, {"x", 1}}))["payload"]["code"], "ParseError");
  h.handle(request(5, "load_puzzle", {{"id", 1}}));
  EXPECT_EQ(h.handle(request(6, "inspect_node", {{"node", "ghost"}}))["payload"]["code"], "UnknownNode");
  json garbage = json::parse(h.handle_line("{not json"));
  EXPECT_TRUE(garbage["id"].is_null());
  EXPECT_EQ(garbage["payload"]["code"], "ProtocolError");
}

TEST(Protocol, ListPuzzles) {
  ProtocolHandler h(cache());
  json r = h.handle(request("l", "list_puzzles"));
  EXPECT_EQ(r["id"], "l");
  EXPECT_EQ(r["payload"]["puzzles"].size(), 17u);
}

TEST(Protocol, SaveRestoreResetRunUntil) {
  ProtocolHandler h(cache());
  h.handle(request(1, "load_puzzle", {{"id", 2}}));
  for (const auto& e : fixtures::solution(2))
    ASSERT_EQ(h.handle(request(2, "apply_edit", edit_to_json(e)))["status"], "ok");
  h.handle(request(3, "tick"));
  json snap = h.handle(request(4, "save"))["payload"]["snapshot"];
  json state = h.handle(request(5, "get_state"))["payload"];

  ProtocolHandler other(cache());
  json restored = other.handle(request(6, "restore", {{"snapshot", snap}}));
  ASSERT_EQ(restored["status"], "ok") << restored.dump();
  EXPECT_EQ(restored["payload"], state);

  json run = other.handle(request(7, "run_until", {{"max_ticks", 50}}));
  EXPECT_EQ(run["payload"]["state"]["solved"], true);
  json reset = other.handle(request(8, "reset", {{"clear_edits", false}}));
  EXPECT_EQ(reset["payload"]["ticks"], 0);
  EXPECT_EQ(reset["payload"]["edits"].size(), 2u);
  reset = other.handle(request(9, "reset", {{"clear_edits", true}}));
  EXPECT_TRUE(reset["payload"]["edits"].empty());
}

// Every request id comes back exactly once, whatever the stream contains.
TEST(ProtocolProperties, EchoLaw) {
  std::mt19937 rng(61);
  const std::vector<std::string> kinds = {"list_puzzles", "load_puzzle", "get_state", "apply_edit", "tick",
                                          "run_until",    "inspect_node", "reset",   "save",       "restore", "bogus"};
  const std::vector<json> payloads = {json::object(),
                                      {{"id", 1}},
                                      {{"id", 99}},
                                      {{"count", 3}},
                                      {{"count", -1}},
                                      {{"max_ticks", 4}},
                                      {{"node", "door"}},
                                      connect_args("true", "out", "door", "open"),
                                      {{"op", "disconnect"}, {"args", {{"to", {"door", "open"}}}}},
                                      {{"clear_edits", true}},
                                      {{"snapshot", 5}},
                                      json::array(),
                                      "text"};
  ProtocolHandler h(cache());
  std::map<int, int> seen;
  for (int i = 0; i < 400; ++i) {
    json req = request(i, kinds[std::uniform_int_distribution<std::size_t>(0, kinds.size() - 1)(rng)],
                       payloads[std::uniform_int_distribution<std::size_t>(0, payloads.size() - 1)(rng)]);
    if (i % 37 == 0) req.erase("payload");
    std::string line = compact_text(req);
    if (i % 53 == 0) line = line.substr(0, line.size() / 2);
    json resp;
    ASSERT_NO_THROW(resp = json::parse(h.handle_line(line)));
    ASSERT_TRUE(resp["status"] == "ok" || resp["status"] == "error");
    if (resp["id"].is_number_integer()) ++seen[resp["id"].get<int>()];
    if (i % 53 != 0) {
      EXPECT_EQ(resp["id"], i);
    }
  }
  for (const auto& [id, n] : seen) EXPECT_EQ(n, 1) << id;
}

TEST(Server, NewlineDelimitedJsonOverTcp) {
  RunningServer srv(ephemeral());
  LineClient c(srv.port);
  ASSERT_TRUE(c.connected());
  EXPECT_EQ(c.call(request(1, "load_puzzle", {{"id", 1}}))["status"], "ok");
  EXPECT_EQ(c.call(request(2, "apply_edit", connect_args("true", "out", "door", "open")))["status"], "ok");
  json t = c.call(request(3, "tick", {{"count", 2}}));
  EXPECT_EQ(t["payload"]["state"]["solved"], true);
  c.send("garbage");
  EXPECT_EQ(json::parse(c.read_line())["payload"]["code"], "ProtocolError");

  // A second connection has its own session.
  LineClient d(srv.port);
  EXPECT_EQ(d.call(request(1, "get_state"))["payload"]["code"], "ProtocolError");
}

TEST(Server, HttpApiAndStaticUi) {
  ServeOptions o = ephemeral();
  o.http_port = 0;
  o.ui_dir = fs::path(NODEHACK_UI_FIXTURE);
  RunningServer srv(o);
  ASSERT_GT(srv.server.http_port(), 0);
  httplib::Client http("127.0.0.1", srv.server.http_port());

  auto page = http.Get("/index.html");
  ASSERT_TRUE(page);
  EXPECT_EQ(page->status, 200);
  EXPECT_NE(page->body.find("static mount ok"), std::string::npos);

  auto post = [&](const json& body) {
    auto res = http.Post("/api", compact_text(body), "application/json");
    EXPECT_TRUE(res);
    return res ? json::parse(res->body) : json();
  };
  json loaded = post(request(1, "load_puzzle", {{"id", 1}}));
  ASSERT_EQ(loaded["status"], "ok");
  std::string token = loaded["session"];
  json edit = request(2, "apply_edit", connect_args("true", "out", "door", "open"));
  edit["session"] = token;
  EXPECT_EQ(post(edit)["status"], "ok");
  json tick = request(3, "tick", {{"count", 2}});
  tick["session"] = token;
  json ticked = post(tick);
  EXPECT_EQ(ticked["payload"]["state"]["solved"], true);
  EXPECT_EQ(ticked["session"], token);

  // Without a token a fresh session starts.
  json fresh = post(request(4, "get_state"));
  EXPECT_EQ(fresh["payload"]["code"], "ProtocolError");
  EXPECT_NE(fresh["session"], token);
}

TEST(Server, SaveThenLoad) {
  fs::path snap = fs::temp_directory_path() / ("nodehack_snap_" + std::to_string(::getpid()) + ".json");
  fs::remove(snap);
  {
    ServeOptions o = ephemeral();
    o.save = snap;
    RunningServer srv(o);
    LineClient c(srv.port);
    c.call(request(1, "load_puzzle", {{"id", 1}}));
    c.call(request(2, "apply_edit", connect_args("true", "out", "door", "open")));
    c.call(request(3, "tick"));
    c.close();
    for (int i = 0; i < 100 && !fs::exists(snap); ++i) std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  ASSERT_TRUE(fs::exists(snap));
  ServeOptions o = ephemeral();
  o.load = snap;
  RunningServer srv(o);
  LineClient c(srv.port);
  json s = c.call(request(1, "get_state"));
  ASSERT_EQ(s["status"], "ok") << s.dump();
  EXPECT_EQ(s["payload"]["ticks"], 1);
  EXPECT_EQ(s["payload"]["solved"], true);
  fs::remove(snap);
}
