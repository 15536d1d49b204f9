#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fw {

// Every failure the engine, service or harness can report. The enumerator
// name is the wire-visible error name (HTTP body, CLI stderr).
enum class ErrorCode {
  InvalidAgenda,
  InvalidArgument,
  DuplicateFacilitator,
  WrongPhase,
  NotFacilitator,
  NotStakeholder,
  Unauthorized,
  StepsIncomplete,
  OutOfOrder,
  AlreadyOpen,
  NothingOpen,
  StepClosed,
  EmptyText,
  TextTooLong,
  DuplicateText,
  OverlappingGroups,
  UnknownStatement,
  UnknownArea,
  OutOfScale,
  UnknownItem,
  TooMany,
  DuplicateItem,
  NoReport,
  EmptyInput,
  MalformedBallot,
  TooFewRankers,
  TooFewItems,
  AfterExceedsBefore,
  NoAreas,
  UnassignedStatement,
  KindOrderViolation,
  UnknownParent,
  VisionReused,
  EmptySelection,
  ScenarioCountOutOfRange,
  SingleGroup,
  UnknownAlias,
  InsufficientHistory,
  TaggingDisabled,
  UnknownCriterion,
  SequenceConflict,
  CorruptLog,
  UnknownWorkshop,
  UnknownStepKind,
  EvenVoters,
  NotFound,
  Io,
};

std::string_view error_name(ErrorCode code) noexcept;
std::optional<ErrorCode> error_from_name(std::string_view name) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }
  std::string_view name() const noexcept { return error_name(code_); }

 private:
  ErrorCode code_;
};

// Raised by replay when the log is not a well-formed fold input.
class CorruptLogError : public Error {
 public:
  CorruptLogError(std::uint64_t offending_seq, const std::string& message)
      : Error(ErrorCode::CorruptLog, message), seq_(offending_seq) {}

  std::uint64_t offending_seq() const noexcept { return seq_; }

 private:
  std::uint64_t seq_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace fw
