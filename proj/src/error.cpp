#include "fw/error.hpp"

#include <array>

namespace fw {
namespace {

constexpr std::array kNames = {
    "InvalidAgenda",
    "InvalidArgument",
    "DuplicateFacilitator",
    "WrongPhase",
    "NotFacilitator",
    "NotStakeholder",
    "Unauthorized",
    "StepsIncomplete",
    "OutOfOrder",
    "AlreadyOpen",
    "NothingOpen",
    "StepClosed",
    "EmptyText",
    "TextTooLong",
    "DuplicateText",
    "OverlappingGroups",
    "UnknownStatement",
    "UnknownArea",
    "OutOfScale",
    "UnknownItem",
    "TooMany",
    "DuplicateItem",
    "NoReport",
    "EmptyInput",
    "MalformedBallot",
    "TooFewRankers",
    "TooFewItems",
    "AfterExceedsBefore",
    "NoAreas",
    "UnassignedStatement",
    "KindOrderViolation",
    "UnknownParent",
    "VisionReused",
    "EmptySelection",
    "ScenarioCountOutOfRange",
    "SingleGroup",
    "UnknownAlias",
    "InsufficientHistory",
    "TaggingDisabled",
    "UnknownCriterion",
    "SequenceConflict",
    "CorruptLog",
    "UnknownWorkshop",
    "UnknownStepKind",
    "EvenVoters",
    "NotFound",
    "Io",
};

}  // namespace

std::string_view error_name(ErrorCode code) noexcept {
  auto i = static_cast<std::size_t>(code);
  return i < kNames.size() ? std::string_view(kNames[i]) : std::string_view("Unknown");
}

std::optional<ErrorCode> error_from_name(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<ErrorCode>(i);
  }
  return std::nullopt;
}

static_assert(kNames.size() == static_cast<std::size_t>(ErrorCode::Io) + 1);

}  // namespace fw
