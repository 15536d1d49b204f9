#include "fw/types.hpp"

#include <array>
#include <string>

#include "fw/error.hpp"

namespace fw {
namespace {

constexpr std::array<std::string_view, 5> kPhases = {"Preparation", "Critique", "Fantasy",
                                                     "Implementation", "Closed"};
constexpr std::array<std::string_view, 12> kStepKinds = {
    "IdeaEntry",      "Merge",           "Rating",          "Ranking",
    "CutOff",         "Chat",            "DelphiGate",      "SelfAssessment",
    "BehaviorSnapshot", "TreeBuild",     "ScenarioCompose", "HomologousGroup"};
constexpr std::array<std::string_view, 3> kStepStates = {"Pending", "Open", "Closed"};
constexpr std::array<std::string_view, 2> kRoles = {"Facilitator", "Stakeholder"};
constexpr std::array<std::string_view, 4> kStatuses = {"Raw", "Active", "Merged", "Eliminated"};
constexpr std::array<std::string_view, 3> kDecisions = {"Converged", "Iterate", "BudgetStop"};
constexpr std::array<std::string_view, 4> kNodeKinds = {"Vision", "Obstacle", "Action",
                                                        "Resource"};
constexpr std::array<std::string_view, 3> kBases = {"borda", "mean_rating", "mean_rank"};

template <typename E, std::size_t N>
E parse(const std::array<std::string_view, N>& names, std::string_view s, const char* what) {
  for (std::size_t i = 0; i < N; ++i) {
    if (names[i] == s) return static_cast<E>(i);
  }
  fail(ErrorCode::InvalidArgument, std::string("unknown ") + what + " '" + std::string(s) + "'");
}

}  // namespace

std::string_view to_string(Phase p) noexcept { return kPhases[static_cast<std::size_t>(p)]; }
std::string_view to_string(StepKind k) noexcept { return kStepKinds[static_cast<std::size_t>(k)]; }
std::string_view to_string(StepState s) noexcept {
  return kStepStates[static_cast<std::size_t>(s)];
}
std::string_view to_string(Role r) noexcept { return kRoles[static_cast<std::size_t>(r)]; }
std::string_view to_string(StatementStatus s) noexcept {
  return kStatuses[static_cast<std::size_t>(s)];
}
std::string_view to_string(GateDecision d) noexcept {
  return kDecisions[static_cast<std::size_t>(d)];
}
std::string_view to_string(NodeKind k) noexcept { return kNodeKinds[static_cast<std::size_t>(k)]; }
std::string_view to_string(ScoreBasis b) noexcept { return kBases[static_cast<std::size_t>(b)]; }

Phase parse_phase(std::string_view s) { return parse<Phase>(kPhases, s, "phase"); }
StepKind parse_step_kind(std::string_view s) {
  for (std::size_t i = 0; i < kStepKinds.size(); ++i) {
    if (kStepKinds[i] == s) return static_cast<StepKind>(i);
  }
  fail(ErrorCode::UnknownStepKind, "unknown step kind '" + std::string(s) + "'");
}
Role parse_role(std::string_view s) { return parse<Role>(kRoles, s, "role"); }
StatementStatus parse_statement_status(std::string_view s) {
  return parse<StatementStatus>(kStatuses, s, "statement status");
}
GateDecision parse_gate_decision(std::string_view s) {
  return parse<GateDecision>(kDecisions, s, "gate decision");
}
NodeKind parse_node_kind(std::string_view s) { return parse<NodeKind>(kNodeKinds, s, "node kind"); }
ScoreBasis parse_score_basis(std::string_view s) {
  return parse<ScoreBasis>(kBases, s, "score basis");
}

Phase next_phase(Phase p) noexcept {
  return p == Phase::Closed ? Phase::Closed : static_cast<Phase>(static_cast<int>(p) + 1);
}

bool is_optional_step(StepKind k) noexcept {
  return k == StepKind::SelfAssessment || k == StepKind::BehaviorSnapshot ||
         k == StepKind::HomologousGroup;
}

}  // namespace fw
