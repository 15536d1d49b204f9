#pragma once

// Read-only behavioral measurements over a folded workshop.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fw/state.hpp"

namespace fw::analytics {

// Snapshots of one participant ordered by round, then step kind. Throws UnknownAlias.
std::vector<BehaviorSnapshot> behavior_series(const WorkshopState& state, const std::string& alias);

// Mean absolute rating change on the items two consecutive rating snapshots
// share (restricted to `items` when non-empty), averaged over consecutive
// pairs. Throws UnknownAlias or InsufficientHistory (< 2 usable snapshots).
double stability(const WorkshopState& state, const std::string& alias,
                 const std::vector<std::string>& items = {});

struct CriteriaDistribution {
  int round = 0;
  std::map<std::string, double> fractions;  // over tagged submissions only
  std::size_t tagged = 0;
  std::size_t untagged = 0;
  std::optional<std::string> dominant;  // argmax, first criterion in agenda order on ties
};

// One entry per rater's latest rating submission in the round. Throws
// TaggingDisabled when the agenda lists no criteria.
CriteriaDistribution criteria_distribution(const WorkshopState& state, int round);
std::vector<CriteriaDistribution> criteria_shift(const WorkshopState& state);

struct StepKnowledge {
  std::string step_id;
  std::optional<double> mean;  // nullopt = no data
  std::size_t count = 0;
};

struct KnowledgeSummary {
  std::vector<StepKnowledge> per_step;  // every SelfAssessment step, in order
  std::map<std::string, std::vector<std::pair<std::string, int>>> per_alias;  // step order
};

KnowledgeSummary knowledge_gain_summary(const WorkshopState& state);

}  // namespace fw::analytics
