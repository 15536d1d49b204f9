#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fw/types.hpp"

namespace fw {

using TimestampMs = std::int64_t;

inline constexpr std::size_t kMaxStatementChars = 2000;
inline constexpr std::size_t kMaxChatChars = 1000;
inline constexpr int kKnowledgeScaleMax = 5;
inline constexpr const char* kOthersArea = "Others";

struct ConvergencePolicy {
  double w_min = 0.6;
  int max_rounds = 2;
  double min_elimination_fraction = 0.1;

  bool operator==(const ConvergencePolicy&) const = default;
};

struct ConvergenceReport {
  int round = 0;
  double kendall_w = 0.0;
  double eliminated_fraction = 0.0;
  GateDecision decision = GateDecision::Iterate;
  int rankers = 0;

  bool operator==(const ConvergenceReport&) const = default;
};

struct ExplosionGuard {
  int max_nodes_per_vision = 40;
  int max_total_nodes = 200;

  bool operator==(const ExplosionGuard&) const = default;
};

struct SimilarityConfig {
  double threshold = 0.4;
  std::vector<std::string> stopwords;

  bool operator==(const SimilarityConfig&) const = default;
};

struct AreaProfile {
  std::string label;
  std::vector<std::string> keywords;  // empty = label's own tokens

  bool operator==(const AreaProfile&) const = default;
};

struct StepSpec {
  StepKind kind = StepKind::IdeaEntry;
  std::optional<std::int64_t> time_limit_s;
  std::optional<int> cutoff_n;  // CutOff steps only

  bool operator==(const StepSpec&) const = default;
};

struct PhaseSpec {
  Phase phase = Phase::Preparation;
  std::vector<StepSpec> steps;

  bool operator==(const PhaseSpec&) const = default;
};

struct Agenda {
  std::vector<PhaseSpec> phases;
  ConvergencePolicy policy;
  int top_k = 10;
  int rating_scale_max = 5;
  ScoreBasis cutoff_basis = ScoreBasis::Borda;
  bool zero_support_rule = true;
  double zero_support_mean_below = 1.0;
  std::vector<AreaProfile> area_profiles;
  std::vector<std::string> criteria;  // empty disables criterion tagging
  ExplosionGuard guard;
  int scenarios_min = 2;
  int scenarios_max = 3;
  SimilarityConfig similarity;

  const PhaseSpec* phase_spec(Phase p) const;
  bool operator==(const Agenda&) const = default;
};

struct Participant {
  std::string alias;
  Role role = Role::Stakeholder;
  std::optional<std::string> group_label;
  std::string token_digest;  // hex SHA-256 of the bearer token

  bool operator==(const Participant&) const = default;
};

struct Statement {
  std::string id;
  std::string text;
  std::string author_alias;
  std::string area;
  std::vector<std::string> merged_from;
  StatementStatus status = StatementStatus::Raw;
  TimestampMs created_at = 0;

  bool operator==(const Statement&) const = default;
};

struct Step {
  std::string id;
  StepKind kind = StepKind::IdeaEntry;
  Phase phase = Phase::Preparation;
  int agenda_pos = 0;
  StepState state = StepState::Pending;
  int round_index = 0;
  std::optional<int> cutoff_n;
  std::optional<TimestampMs> opened_at;
  std::optional<TimestampMs> closed_at;
  std::optional<TimestampMs> deadline;
  bool auto_closed = false;

  bool operator==(const Step&) const = default;
};

struct EvaluationRound {
  int index = 0;
  std::vector<std::string> item_ids;
  std::map<std::string, std::map<std::string, int>> ratings;        // alias -> item -> value
  std::map<std::string, std::string> criterion_tags;                 // alias -> tag
  std::map<std::string, std::vector<std::string>> rankings;          // alias -> ordered items
  std::map<std::string, double> mean_rating;
  std::map<std::string, double> borda;
  std::vector<std::string> zero_support_eliminated;
  std::vector<std::string> cutoff_eliminated;
  std::optional<ConvergenceReport> convergence;
  bool low_discrimination = false;
  int rating_submissions = 0;  // including overwrites, for tag accounting

  bool operator==(const EvaluationRound&) const = default;
};

struct ChatMessage {
  std::uint64_t seq = 0;
  std::string alias;
  std::string text;
  TimestampMs at = 0;

  bool operator==(const ChatMessage&) const = default;
};

struct SelfAssessment {
  std::string alias;
  std::string step_id;
  int knowledge_gain = 0;
  std::string comment;
  TimestampMs at = 0;

  bool operator==(const SelfAssessment&) const = default;
};

struct BehaviorSnapshot {
  std::string alias;
  int round = 0;
  StepKind step_kind = StepKind::Rating;
  std::map<std::string, double> vector;
  TimestampMs taken_at = 0;

  bool operator==(const BehaviorSnapshot&) const = default;
};

struct ScenarioNode {
  std::string id;
  NodeKind kind = NodeKind::Vision;
  std::string text;
  std::optional<std::string> parent;
  std::string author_alias;
  TimestampMs created_at = 0;

  bool operator==(const ScenarioNode&) const = default;
};

struct Scenario {
  std::string id;
  std::string label;
  std::string group;
  std::vector<std::string> vision_ids;
  std::vector<std::string> member_nodes;
  std::string narrative;

  bool operator==(const Scenario&) const = default;
};

struct GuardWarning {
  std::string node_id;
  std::string vision_id;
  int subtree_nodes = 0;
  int total_nodes = 0;
  bool per_vision_limit = false;
  bool total_limit = false;

  bool operator==(const GuardWarning&) const = default;
};

}  // namespace fw
