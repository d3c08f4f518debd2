#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"

using namespace nodehack;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorCode::IoError;
}

Program not_fixture() {
  Program p = add_node({}, make_node("t", kind::Constant{make_bool(true)}));
  return add_node(std::move(p), make_node("not", kind::Not{}));
}

}  // namespace

TEST(GraphEdits, AddConstantToEmptyProgram) {
  Program p = add_node({}, make_node("c", kind::Constant{make_bool(true)}));
  EXPECT_EQ(p.nodes.size(), 1u);
  EXPECT_TRUE(p.tubes.empty());
}

TEST(GraphEdits, DuplicateIdIsRejected) {
  Program p = add_node({}, make_node("n1", kind::Constant{make_bool(true)}));
  EXPECT_EQ(code_of([&] { add_node(p, make_node("n1", kind::Not{})); }), ErrorCode::DuplicateNodeId);
}

TEST(GraphEdits, NotWithTwoInputsIsMalformed) {
  Node bad = make_node("not", kind::Not{});
  bad.ports.insert(bad.ports.begin(), in_port("extra", DataType::Boolean));
  EXPECT_EQ(code_of([&] { add_node({}, bad); }), ErrorCode::MalformedPorts);
}

TEST(GraphEdits, ConnectAddsOneTube) {
  Program p = connect(not_fixture(), {"t", "out"}, {"not", "in"});
  EXPECT_EQ(p.tubes.size(), 1u);
}

TEST(GraphEdits, ReversedConnectIsDirectionMismatch) {
  EXPECT_EQ(code_of([] { connect(not_fixture(), {"not", "in"}, {"t", "out"}); }), ErrorCode::DirectionMismatch);
}

TEST(GraphEdits, SecondProducerIsInputOccupied) {
  Program p = connect(not_fixture(), {"t", "out"}, {"not", "in"});
  p = add_node(std::move(p), make_node("f", kind::Constant{make_bool(false)}));
  EXPECT_EQ(code_of([&] { connect(p, {"f", "out"}, {"not", "in"}); }), ErrorCode::InputOccupied);
}

TEST(GraphEdits, UnknownEndpoints) {
  EXPECT_EQ(code_of([] { connect(not_fixture(), {"zz", "out"}, {"not", "in"}); }), ErrorCode::UnknownEndpoint);
  EXPECT_EQ(code_of([] { connect(not_fixture(), {"t", "nope"}, {"not", "in"}); }), ErrorCode::UnknownEndpoint);
}

TEST(GraphEdits, DisconnectRemovesTube) {
  Program p = disconnect(connect(not_fixture(), {"t", "out"}, {"not", "in"}), {"not", "in"});
  EXPECT_TRUE(p.tubes.empty());
}

TEST(GraphEdits, DisconnectEmptyPortIsNoSuchTube) {
  EXPECT_EQ(code_of([] { disconnect(not_fixture(), {"not", "in"}); }), ErrorCode::NoSuchTube);
}

TEST(GraphEdits, ConnectDisconnectConnectEqualsConnect) {
  Program once = connect(not_fixture(), {"t", "out"}, {"not", "in"});
  Program again = connect(disconnect(once, {"not", "in"}), {"t", "out"}, {"not", "in"});
  EXPECT_EQ(once, again);
  EXPECT_EQ(serialize_program(once), serialize_program(again));
}

TEST(GraphEdits, SetConstantRetypesOutput) {
  Program p = set_constant(not_fixture(), "t", make_number(5));
  EXPECT_EQ(p.nodes.at("t").ports, std::vector<PortSpec>{out_port("out", DataType::Number)});
  EXPECT_EQ(code_of([&] { set_constant(p, "not", make_bool(true)); }), ErrorCode::MalformedPorts);
  EXPECT_EQ(code_of([&] { set_constant(p, "t", make_number(std::nan(""))); }), ErrorCode::MalformedPorts);
}

// Random edit sequences, including nonsense, never crash and never leave an
// input with two tubes.
TEST(GraphProperties, EditsAreTotalAndSingleWriter) {
  std::mt19937 rng(7);
  const std::vector<std::string> ids = {"a", "b", "c", "d", "e", "ghost"};
  const std::vector<std::string> ports = {"a", "b", "in", "out", "cond", "then", "else", "zzz"};
  auto pick = [&](const std::vector<std::string>& v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };
  for (int trial = 0; trial < 300; ++trial) {
    Program p;
    p = add_node(std::move(p), make_node("a", kind::Arithmetic{ArithOp::Add}));
    p = add_node(std::move(p), make_node("b", kind::Not{}));
    p = add_node(std::move(p), make_node("c", kind::Conditional{}));
    p = add_node(std::move(p), make_node("d", kind::Constant{make_number(1)}));
    p = add_node(std::move(p), make_node("e", kind::Logical{LogicOp::Or}));
    for (int i = 0; i < 60; ++i) {
      int op = std::uniform_int_distribution<int>(0, 3)(rng);
      try {
        if (op <= 1)
          p = connect(p, {pick(ids), pick(ports)}, {pick(ids), pick(ports)});
        else if (op == 2)
          p = disconnect(p, {pick(ids), pick(ports)});
        else
          p = set_constant(p, pick(ids), make_number(i));
      } catch (const Error&) {
      }
      std::set<PortRef> targets;
      for (const auto& t : p.tubes) ASSERT_TRUE(targets.insert(t.to).second);
      ASSERT_NO_THROW(check_tubes(p));
    }
  }
}

TEST(ProgramDocuments, EmptyProgram) {
  json doc = serialize_program({});
  EXPECT_EQ(doc, (json{{"format_version", 1}, {"nodes", json::array()}, {"tubes", json::array()}}));
  EXPECT_EQ(deserialize_program(doc), Program{});
}

TEST(ProgramDocuments, MissingFieldIsNamed) {
  try {
    deserialize_program_text(R"({"format_version": 1, "nodes": []})");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("program.tubes"), std::string::npos) << e.what();
  }
  try {
    deserialize_program_text(R"({"format_version": 1, "nodes": [{"id": "x", "kind": "Not", "params": {}}], "tubes": []})");
    FAIL() << "expected ParseError";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
    EXPECT_NE(std::string(e.what()).find("program.nodes[0].position"), std::string::npos) << e.what();
  }
}

TEST(ProgramDocuments, TruncatedTextIsParseError) {
  std::string text = canonical_text(serialize_program(connect(not_fixture(), {"t", "out"}, {"not", "in"})));
  EXPECT_EQ(code_of([&] { deserialize_program_text(text.substr(0, text.size() / 2)); }), ErrorCode::ParseError);
}

TEST(ProgramDocuments, UnknownFieldIsRejected) {
  EXPECT_EQ(code_of([] { deserialize_program_text(R"({"format_version": 1, "nodes": [], "tubes": [], "x": 1})"); }),
            ErrorCode::ParseError);
}

TEST(ProgramDocuments, RoundTripOverBundledPuzzles) {
  for (int id = 1; id <= kPuzzleCount; ++id) {
    SCOPED_TRACE("puzzle " + std::to_string(id));
    std::string text = read_text_file(puzzle_path(fixtures::puzzles(), id));
    PuzzleSpec spec = puzzle_from_text(text);
    EXPECT_EQ(canonical_text(puzzle_to_json(spec)), text);

    Program p = spec.initial_program();
    json doc = serialize_program(p);
    Program back = deserialize_program(doc, spec.signatures());
    EXPECT_EQ(back, p);
    EXPECT_EQ(serialize_program(back), doc);
  }
}
