#include "fw/scenario.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

#include "fw/error.hpp"
#include "fw/grouping.hpp"

namespace fw::scenario {
namespace {

const ScenarioNode* find_node(const std::vector<ScenarioNode>& forest, const std::string& id) {
  for (const auto& n : forest) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

}  // namespace

std::optional<NodeKind> child_kind(NodeKind parent) noexcept {
  switch (parent) {
    case NodeKind::Vision:
      return NodeKind::Obstacle;
    case NodeKind::Obstacle:
      return NodeKind::Action;
    case NodeKind::Action:
      return NodeKind::Resource;
    case NodeKind::Resource:
      return std::nullopt;
  }
  return std::nullopt;
}

void check_attach(const std::vector<ScenarioNode>& forest, NodeKind kind,
                  const std::optional<std::string>& parent) {
  if (kind == NodeKind::Vision) {
    if (parent) fail(ErrorCode::KindOrderViolation, "a Vision node cannot have a parent");
    return;
  }
  if (!parent) {
    fail(ErrorCode::KindOrderViolation,
         std::string(to_string(kind)) + " node needs a parent of the preceding kind");
  }
  const ScenarioNode* p = find_node(forest, *parent);
  if (p == nullptr) fail(ErrorCode::UnknownParent, "no node " + *parent);
  if (child_kind(p->kind) != kind) {
    fail(ErrorCode::KindOrderViolation, std::string(to_string(kind)) + " cannot hang under " +
                                            std::string(to_string(p->kind)));
  }
}

std::string root_of(const std::vector<ScenarioNode>& forest, const std::string& node_id) {
  const ScenarioNode* n = find_node(forest, node_id);
  if (n == nullptr) fail(ErrorCode::UnknownParent, "no node " + node_id);
  std::size_t hops = 0;
  while (n->parent) {
    n = find_node(forest, *n->parent);
    if (n == nullptr || ++hops > forest.size()) {
      fail(ErrorCode::KindOrderViolation, "broken parent chain at " + node_id);
    }
  }
  return n->id;
}

std::vector<std::string> subtree(const std::vector<ScenarioNode>& forest,
                                 const std::string& root_id) {
  // Parents always precede children in the forest, so one forward pass works.
  std::set<std::string> inside{root_id};
  std::vector<std::string> out;
  for (const auto& n : forest) {
    if (n.id == root_id || (n.parent && inside.count(*n.parent) != 0)) {
      inside.insert(n.id);
      out.push_back(n.id);
    }
  }
  return out;
}

std::optional<GuardWarning> guard_check(const std::vector<ScenarioNode>& forest,
                                        const std::string& node_id, const ExplosionGuard& guard) {
  GuardWarning w;
  w.node_id = node_id;
  w.vision_id = root_of(forest, node_id);
  w.subtree_nodes = static_cast<int>(subtree(forest, w.vision_id).size());
  w.total_nodes = static_cast<int>(forest.size());
  w.per_vision_limit = w.subtree_nodes >= guard.max_nodes_per_vision;
  w.total_limit = w.total_nodes >= guard.max_total_nodes;
  if (!w.per_vision_limit && !w.total_limit) return std::nullopt;
  return w;
}

bool forest_is_well_formed(const std::vector<ScenarioNode>& forest) {
  std::unordered_map<std::string, NodeKind> seen;
  for (const auto& n : forest) {
    if (seen.count(n.id) != 0) return false;
    if (n.kind == NodeKind::Vision) {
      if (n.parent) return false;
    } else {
      if (!n.parent) return false;
      auto p = seen.find(*n.parent);  // parent must come earlier: rules out cycles
      if (p == seen.end() || child_kind(p->second) != n.kind) return false;
    }
    seen.emplace(n.id, n.kind);
  }
  return true;
}

Composition compose(const std::vector<ScenarioNode>& forest,
                    const std::vector<Selection>& selections, int min_scenarios,
                    int max_scenarios) {
  if (selections.empty()) fail(ErrorCode::EmptySelection, "no scenarios selected");
  const int count = static_cast<int>(selections.size());
  if (count < min_scenarios || count > max_scenarios) {
    fail(ErrorCode::ScenarioCountOutOfRange,
         std::to_string(count) + " scenarios requested, expected " +
             std::to_string(min_scenarios) + ".." + std::to_string(max_scenarios));
  }

  Composition out;
  std::set<std::string> used;
  for (std::size_t i = 0; i < selections.size(); ++i) {
    const auto& sel = selections[i];
    if (sel.vision_ids.empty()) {
      fail(ErrorCode::EmptySelection, "scenario '" + sel.label + "' selects no visions");
    }
    Scenario s;
    s.id = "SC" + std::to_string(i + 1);
    s.label = sel.label;
    s.group = sel.group.empty() ? "Group 1" : sel.group;
    s.narrative = sel.narrative;
    for (const auto& v : sel.vision_ids) {
      const ScenarioNode* n = find_node(forest, v);
      if (n == nullptr || n->kind != NodeKind::Vision) {
        fail(ErrorCode::UnknownParent, v + " is not a vision");
      }
      if (!used.insert(v).second) fail(ErrorCode::VisionReused, v + " is already in a scenario");
      s.vision_ids.push_back(v);
      for (auto& id : subtree(forest, v)) s.member_nodes.push_back(std::move(id));
    }
    out.scenarios.push_back(std::move(s));
  }
  for (const auto& n : forest) {
    if (n.kind == NodeKind::Vision && used.count(n.id) == 0) out.uncovered_visions.push_back(n.id);
  }
  return out;
}

std::vector<HomologousCluster> group_homologous(const std::vector<GroupScenarios>& groups,
                                                int target, const SimilarityConfig& config) {
  if (target < 3 || target > 4) fail(ErrorCode::InvalidArgument, "homologous target is 3..4");
  std::size_t non_empty = 0;
  for (const auto& g : groups) non_empty += g.scenarios.empty() ? 0 : 1;
  if (non_empty < 2) fail(ErrorCode::SingleGroup, "homologous grouping needs 2 or more groups");

  struct Cluster {
    std::vector<std::string> ids;
    grouping::TokenSet tokens;
    double cohesion = 1.0;
  };
  std::vector<Cluster> clusters;
  for (const auto& g : groups) {
    for (const auto& sc : g.scenarios) {
      Cluster c;
      c.ids.push_back(g.group + "/" + sc.id);
      for (const auto& text : sc.node_texts) {
        for (auto& t : grouping::tokenize(text, config)) c.tokens.push_back(std::move(t));
      }
      std::sort(c.tokens.begin(), c.tokens.end());
      c.tokens.erase(std::unique(c.tokens.begin(), c.tokens.end()), c.tokens.end());
      clusters.push_back(std::move(c));
    }
  }

  while (clusters.size() > static_cast<std::size_t>(target)) {
    std::size_t best_a = 0, best_b = 1;
    double best = -1.0;
    for (std::size_t a = 0; a < clusters.size(); ++a) {
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        double s = grouping::jaccard(clusters[a].tokens, clusters[b].tokens);
        if (s > best) {
          best = s;
          best_a = a;
          best_b = b;
        }
      }
    }
    Cluster& keep = clusters[best_a];
    Cluster& gone = clusters[best_b];
    keep.ids.insert(keep.ids.end(), gone.ids.begin(), gone.ids.end());
    grouping::TokenSet merged;
    std::set_union(keep.tokens.begin(), keep.tokens.end(), gone.tokens.begin(), gone.tokens.end(),
                   std::back_inserter(merged));
    keep.tokens = std::move(merged);
    keep.cohesion = best;
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
  }

  std::vector<HomologousCluster> out;
  for (auto& c : clusters) out.push_back({std::move(c.ids), c.cohesion});
  return out;
}

}  // namespace fw::scenario
