#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace nodehack {

/// Typed failure categories raised by engine operations.
///
/// Graph edits, class-table edits, document parsing and puzzle loading all
/// report failures by throwing `Error` carrying one of these codes. Evaluation
/// never throws; its failures are reported as diagnostics instead.
enum class ErrorCode {
  // graph_core
  DuplicateNodeId,
  MalformedPorts,
  UnknownNode,
  UnknownEndpoint,
  DirectionMismatch,
  InputOccupied,
  NoSuchTube,
  ParseError,
  // oop_runtime
  DuplicateClass,
  UnknownParent,
  InheritanceCycle,
  UnknownClass,
  ConstructorArityMismatch,
  InvalidInputType,
  UnknownMethod,
  UnknownField,
  UnknownFunction,
  // world_sim
  UnknownEntity,
  InvalidWrite,
  // puzzle_pack
  UnknownPuzzle,
  CorruptSpec,
  ForbiddenEdit,
  // cli_runner
  ProtocolError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateNodeId: return "DuplicateNodeId";
    case ErrorCode::MalformedPorts: return "MalformedPorts";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownEndpoint: return "UnknownEndpoint";
    case ErrorCode::DirectionMismatch: return "DirectionMismatch";
    case ErrorCode::InputOccupied: return "InputOccupied";
    case ErrorCode::NoSuchTube: return "NoSuchTube";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateClass: return "DuplicateClass";
    case ErrorCode::UnknownParent: return "UnknownParent";
    case ErrorCode::InheritanceCycle: return "InheritanceCycle";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::ConstructorArityMismatch: return "ConstructorArityMismatch";
    case ErrorCode::InvalidInputType: return "InvalidInputType";
    case ErrorCode::UnknownMethod: return "UnknownMethod";
    case ErrorCode::UnknownField: return "UnknownField";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::InvalidWrite: return "InvalidWrite";
    case ErrorCode::UnknownPuzzle: return "UnknownPuzzle";
    case ErrorCode::CorruptSpec: return "CorruptSpec";
    case ErrorCode::ForbiddenEdit: return "ForbiddenEdit";
    case ErrorCode::ProtocolError: return "ProtocolError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        detail_(message) {}

  ErrorCode code() const noexcept { return code_; }

  /// Message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace nodehack
