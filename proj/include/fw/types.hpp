#pragma once

#include <string>
#include <string_view>

namespace fw {

enum class Phase { Preparation, Critique, Fantasy, Implementation, Closed };

enum class StepKind {
  IdeaEntry,
  Merge,
  Rating,
  Ranking,
  CutOff,
  Chat,
  DelphiGate,
  SelfAssessment,
  BehaviorSnapshot,
  TreeBuild,
  ScenarioCompose,
  HomologousGroup,
};

enum class StepState { Pending, Open, Closed };
enum class Role { Facilitator, Stakeholder };
enum class StatementStatus { Raw, Active, Merged, Eliminated };
enum class GateDecision { Converged, Iterate, BudgetStop };
enum class NodeKind { Vision, Obstacle, Action, Resource };

// Score used to order items at a CutOff close.
enum class ScoreBasis { Borda, MeanRating, MeanRank };

std::string_view to_string(Phase p) noexcept;
std::string_view to_string(StepKind k) noexcept;
std::string_view to_string(StepState s) noexcept;
std::string_view to_string(Role r) noexcept;
std::string_view to_string(StatementStatus s) noexcept;
std::string_view to_string(GateDecision d) noexcept;
std::string_view to_string(NodeKind k) noexcept;
std::string_view to_string(ScoreBasis b) noexcept;

// Parsers throw Error(InvalidArgument) on unknown names.
Phase parse_phase(std::string_view s);
StepKind parse_step_kind(std::string_view s);
Role parse_role(std::string_view s);
StatementStatus parse_statement_status(std::string_view s);
GateDecision parse_gate_decision(std::string_view s);
NodeKind parse_node_kind(std::string_view s);
ScoreBasis parse_score_basis(std::string_view s);

// Next phase in the fixed forward order; Closed maps to itself.
Phase next_phase(Phase p) noexcept;

// Collateral step kinds may be skipped and never gate phase advance.
bool is_optional_step(StepKind k) noexcept;

}  // namespace fw
