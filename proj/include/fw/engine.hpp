#pragma once

// Command side of one workshop: validates a request against the folded
// state, decides its outcome, writes the resulting events to the log and
// folds them. One Engine is the single logical writer of its log; callers
// serialize access.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fw/clock.hpp"
#include "fw/event_log.hpp"
#include "fw/grouping.hpp"
#include "fw/scenario.hpp"
#include "fw/state.hpp"

namespace fw {

struct Registration {
  std::string alias;
  std::string token;
};

struct IdeaInput {
  std::string text;
  std::optional<std::string> area;
};

struct IdeasResult {
  std::vector<std::string> accepted;            // new statement ids
  std::vector<std::size_t> rejected_duplicates;  // input positions
};

struct MergeEntry {
  std::vector<std::string> members;
  std::string heading;
  std::string area;
};

struct MergeResult {
  std::vector<std::string> issue_ids;  // merged statements, plan order
  std::size_t active_count = 0;
  std::optional<double> reduction_rate;
};

struct StepResult {
  std::string step_id;
  StepKind kind = StepKind::IdeaEntry;
  int round = 0;
  std::size_t active_count = 0;
  std::vector<std::string> eliminated;
  std::map<std::string, double> mean_rating;
  std::map<std::string, double> borda;
  std::size_t snapshots = 0;
  std::optional<GateDecision> decision;
};

struct NodeResult {
  ScenarioNode node;
  std::optional<GuardWarning> warning;
};

class Engine {
 public:
  // Folds whatever the log already holds.
  Engine(EventLog& log, Clock& clock, TokenSource tokens);

  const WorkshopState& state() const { return state_; }
  EventLog& log() { return log_; }

  // Writes workshop_created. Appends "Others" to the areas when missing and
  // moves it last when present. Throws InvalidAgenda / InvalidArgument.
  void create(const std::string& id, const std::string& title, const Agenda& agenda,
              std::vector<std::string> issue_areas);

  Registration register_participant(Role role, std::optional<std::string> group_label);
  void advance_phase(std::string_view token);

  const Step& open_step(std::string_view token, StepKind kind);
  StepResult close_step(std::string_view token);
  // Auto-closes an open step whose deadline has passed. Called before every
  // command; exposed for timers and reads.
  void tick();

  IdeasResult submit_ideas(std::string_view token, const std::vector<IdeaInput>& ideas);
  MergeResult apply_merge_plan(std::string_view token, const std::vector<MergeEntry>& plan);
  void configure_cutoff(std::string_view token, int n);
  void submit_ratings(std::string_view token, const std::map<std::string, int>& ratings,
                      std::optional<std::string> criterion = std::nullopt);
  void submit_ranking(std::string_view token, const std::vector<std::string>& ordered_items);
  GateDecision delphi_gate(std::string_view token);
  ChatMessage post_chat(std::string_view token, const std::string& text);
  std::vector<ChatMessage> fetch_chat(std::uint64_t from_seq) const;
  void submit_self_assessment(std::string_view token, int knowledge_gain,
                              const std::string& comment);

  NodeResult add_node(std::string_view token, NodeKind kind, const std::string& text,
                      std::optional<std::string> parent);
  scenario::Composition compose_scenarios(std::string_view token,
                                          const std::vector<scenario::Selection>& selections);
  std::vector<scenario::HomologousCluster> homologous_proposal(std::string_view token,
                                                               int target) const;

  // Resolves a bearer token; throws Unauthorized.
  const Participant& authenticate(std::string_view token) const;
  const Participant& require_facilitator(std::string_view token) const;

 private:
  void emit(const char* kind, json payload, const std::string& actor);
  StepResult close_internal(const std::string& actor, bool automatic);
  GateDecision gate_internal(const std::string& actor, bool automatic);
  std::optional<ConvergenceReport> build_report() const;

  EventLog& log_;
  Clock& clock_;
  TokenSource tokens_;
  WorkshopState state_;
};

// Code points in valid UTF-8, or nullopt when the bytes are not UTF-8.
std::optional<std::size_t> utf8_length(std::string_view text);

}  // namespace fw
