#pragma once

// Vision -> obstacle -> action -> resource forests, scenario composition and
// homologous grouping. Pure functions over node lists; the engine owns the
// workshop-level gates (phase, open step, authorship).

#include <optional>
#include <string>
#include <vector>

#include "fw/model.hpp"

namespace fw::scenario {

// Kind a child of `parent` must have, or nullopt for Resource leaves.
std::optional<NodeKind> child_kind(NodeKind parent) noexcept;

// Throws KindOrderViolation / UnknownParent when `kind` cannot hang under
// `parent` inside `forest`.
void check_attach(const std::vector<ScenarioNode>& forest, NodeKind kind,
                  const std::optional<std::string>& parent);

// Root vision id of a node.
std::string root_of(const std::vector<ScenarioNode>& forest, const std::string& node_id);

// All node ids in the subtree rooted at `root_id`, in forest order.
std::vector<std::string> subtree(const std::vector<ScenarioNode>& forest,
                                 const std::string& root_id);

// Guard check after `node_id` was appended; nullopt when under both limits.
// A subtree or forest that has reached its limit triggers a warning.
std::optional<GuardWarning> guard_check(const std::vector<ScenarioNode>& forest,
                                        const std::string& node_id, const ExplosionGuard& guard);

// Full scan: acyclic, kind-stratified, single parent of the preceding kind.
bool forest_is_well_formed(const std::vector<ScenarioNode>& forest);

struct Selection {
  std::string label;
  std::vector<std::string> vision_ids;
  std::string group;
  std::string narrative;
};

struct Composition {
  std::vector<Scenario> scenarios;
  std::vector<std::string> uncovered_visions;
};

// Each scenario is the union of the full subtrees of its visions. Throws
// EmptySelection, VisionReused, UnknownParent (id is not a vision root) or
// ScenarioCountOutOfRange when the selection count is outside [min, max].
Composition compose(const std::vector<ScenarioNode>& forest,
                    const std::vector<Selection>& selections, int min_scenarios,
                    int max_scenarios);

struct ScenarioDoc {
  std::string id;
  std::vector<std::string> node_texts;
};

struct GroupScenarios {
  std::string group;
  std::vector<ScenarioDoc> scenarios;
};

struct HomologousCluster {
  std::vector<std::string> scenario_ids;  // "group/id"
  double cohesion = 0.0;                  // Jaccard at the last merge, 1 for singletons
};

// Greedy agglomeration of all groups' scenarios until at most `target`
// clusters remain. Cluster similarity is the Jaccard index of the union of
// member-node tokens. Throws SingleGroup with fewer than 2 non-empty groups,
// InvalidArgument for a target outside 3..4.
std::vector<HomologousCluster> group_homologous(const std::vector<GroupScenarios>& groups,
                                                int target, const SimilarityConfig& config);

}  // namespace fw::scenario
