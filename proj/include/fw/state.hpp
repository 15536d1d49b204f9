#pragma once

// Workshop aggregate as a fold over its event log.
//
// Events are facts: every decision (eliminations, aggregates, gate outcome)
// is computed by the engine before the event is written and carried in its
// payload. `apply` only folds payloads into state, so replaying a log never
// re-runs policy code and always lands on the same state.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "fw/model.hpp"

namespace fw {

using json = nlohmann::json;

struct Event {
  std::uint64_t seq = 0;
  std::string kind;
  json payload = json::object();
  TimestampMs at = 0;
  std::string actor;

  bool operator==(const Event&) const = default;
};

json event_to_json(const Event& e);
// Throws CorruptLog (seq 0 when unknown) on missing or mistyped fields.
Event event_from_json(const json& doc);
std::string event_to_line(const Event& e);

namespace event_kind {
inline constexpr const char* kWorkshopCreated = "workshop_created";
inline constexpr const char* kParticipantRegistered = "participant_registered";
inline constexpr const char* kPhaseAdvanced = "phase_advanced";
inline constexpr const char* kStepOpened = "step_opened";
inline constexpr const char* kStepClosed = "step_closed";
inline constexpr const char* kIdeasSubmitted = "ideas_submitted";
inline constexpr const char* kMergeApplied = "merge_applied";
inline constexpr const char* kRatingsSubmitted = "ratings_submitted";
inline constexpr const char* kRankingSubmitted = "ranking_submitted";
inline constexpr const char* kCutoffConfigured = "cutoff_configured";
inline constexpr const char* kListUpdated = "list_updated";
inline constexpr const char* kChatMessage = "chat_message";
inline constexpr const char* kSelfAssessment = "self_assessment";
inline constexpr const char* kGateDecision = "gate_decision";
inline constexpr const char* kScenarioNodeAdded = "scenario_node_added";
inline constexpr const char* kGuardWarning = "guard_warning";
inline constexpr const char* kScenariosComposed = "scenarios_composed";
}  // namespace event_kind

struct WorkshopState {
  bool created = false;
  std::string id;
  std::string title;
  Agenda agenda;
  Phase phase = Phase::Preparation;
  std::vector<Phase> phase_history;
  std::vector<std::string> issue_areas;
  TimestampMs created_at = 0;

  std::vector<Participant> participants;
  std::vector<Statement> statements;
  std::vector<Step> steps;
  int cursor = 0;  // agenda position of the next step in the current phase
  int round = 0;   // 1-based index of the latest evaluation round
  std::vector<EvaluationRound> rounds;
  std::vector<ChatMessage> chat;
  std::vector<SelfAssessment> self_assessments;
  std::vector<BehaviorSnapshot> snapshots;
  std::vector<ScenarioNode> nodes;
  std::vector<Scenario> scenarios;
  std::vector<std::string> uncovered_visions;
  std::vector<GuardWarning> guard_warnings;
  bool merge_applied = false;
  int raw_pool_size = 0;
  std::optional<double> reduction_rate;
  std::optional<GateDecision> critique_outcome;
  std::uint64_t last_seq = 0;

  const Participant* participant_by_alias(std::string_view alias) const;
  const Participant* participant_by_digest(std::string_view digest) const;
  const Participant* facilitator() const;
  const Statement* statement(std::string_view id) const;
  Statement* statement(std::string_view id);
  const Step* open_step() const;
  Step* open_step();
  const Step* step(std::string_view id) const;
  const EvaluationRound* current_round() const;
  EvaluationRound* current_round();
  std::vector<std::string> active_item_ids() const;
  const PhaseSpec& phase_steps() const;  // empty spec for Closed
  std::optional<std::int64_t> agenda_pos_of(StepKind kind) const;  // first match in phase
};

// Folds one event. Throws CorruptLogError naming event.seq when the event
// does not fit the state (wrong seq, unknown references, bad payload).
void apply(WorkshopState& state, const Event& event);

// Structured view of the state. Timestamps are included only when asked.
json state_to_json(const WorkshopState& state, bool with_timestamps);

// SHA-256 over canonical_dump(state_to_json(state, false)).
std::string state_hash(const WorkshopState& state);

struct ReplayResult {
  WorkshopState state;
  std::string hash;
  std::size_t events = 0;
};

// Deterministic fold from the initial state. Throws CorruptLogError on a
// seq gap or a payload that does not fit.
ReplayResult replay(std::span<const Event> log);

// Parses newline-delimited records; CorruptLogError on malformed lines.
std::vector<Event> parse_log(std::string_view text);

}  // namespace fw
