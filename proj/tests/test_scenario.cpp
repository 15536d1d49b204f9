#include <set>

#include "support.hpp"

#include "fw/scenario.hpp"

using namespace fw;
using namespace fw::scenario;

namespace {

ScenarioNode node(std::string id, NodeKind kind, std::optional<std::string> parent = std::nullopt) {
  ScenarioNode n;
  n.id = std::move(id);
  n.kind = kind;
  n.text = n.id;
  n.parent = std::move(parent);
  return n;
}

// One vision with `branching` children at every level below it.
std::vector<ScenarioNode> full_tree(int branching) {
  std::vector<ScenarioNode> f{node("V", NodeKind::Vision)};
  std::vector<std::string> level{"V"};
  for (NodeKind k : {NodeKind::Obstacle, NodeKind::Action, NodeKind::Resource}) {
    std::vector<std::string> next;
    for (const auto& p : level) {
      for (int i = 0; i < branching; ++i) {
        std::string id = p + std::to_string(i);
        f.push_back(node(id, k, p));
        next.push_back(id);
      }
    }
    level = next;
  }
  return f;
}

}  // namespace

TEST_CASE("kind order") {
  CHECK(child_kind(NodeKind::Vision) == NodeKind::Obstacle);
  CHECK(child_kind(NodeKind::Obstacle) == NodeKind::Action);
  CHECK(child_kind(NodeKind::Action) == NodeKind::Resource);
  CHECK_FALSE(child_kind(NodeKind::Resource).has_value());

  std::vector<ScenarioNode> f{node("V", NodeKind::Vision), node("O", NodeKind::Obstacle, "V")};
  CHECK_NOTHROW(check_attach(f, NodeKind::Vision, std::nullopt));
  CHECK_NOTHROW(check_attach(f, NodeKind::Action, "O"));
  CHECK_CODE(check_attach(f, NodeKind::Resource, "O"), ErrorCode::KindOrderViolation);
  CHECK_CODE(check_attach(f, NodeKind::Obstacle, std::nullopt), ErrorCode::KindOrderViolation);
  CHECK_CODE(check_attach(f, NodeKind::Action, "missing"), ErrorCode::UnknownParent);
}

TEST_CASE("explosion guard fires at a 40-node subtree") {
  auto f = full_tree(3);
  REQUIRE(f.size() == 1 + 3 + 9 + 27);
  CHECK(forest_is_well_formed(f));
  ExplosionGuard g;
  auto w = guard_check(f, f.back().id, g);
  REQUIRE(w.has_value());
  CHECK(w->per_vision_limit);
  CHECK(w->subtree_nodes == 40);
  CHECK(w->vision_id == "V");

  std::vector<ScenarioNode> smaller(f.begin(), f.end() - 1);
  CHECK_FALSE(guard_check(smaller, smaller.back().id, g).has_value());
}

TEST_CASE("malformed forests are detected") {
  CHECK_FALSE(forest_is_well_formed({node("O", NodeKind::Obstacle, "V"), node("V", NodeKind::Vision)}));
  CHECK_FALSE(forest_is_well_formed({node("V", NodeKind::Vision), node("R", NodeKind::Resource, "V")}));
}

TEST_CASE("compose") {
  std::vector<ScenarioNode> f;
  for (int i = 1; i <= 6; ++i) {
    const std::string v = "V" + std::to_string(i);
    f.push_back(node(v, NodeKind::Vision));
    f.push_back(node(v + "o", NodeKind::Obstacle, v));
  }
  auto c = compose(f, {{"a", {"V1", "V2"}, "", ""}, {"b", {"V3", "V4"}, "", ""}, {"c", {"V5", "V6"}, "", ""}}, 2, 3);
  REQUIRE(c.scenarios.size() == 3);
  CHECK(c.uncovered_visions.empty());
  CHECK(c.scenarios[0].member_nodes == std::vector<std::string>{"V1", "V1o", "V2", "V2o"});

  CHECK_CODE(compose(f, {{"a", {"V1"}, "", ""}, {"b", {"V1"}, "", ""}}, 2, 3), ErrorCode::VisionReused);
  CHECK_CODE(compose(f, {{"a", {}, "", ""}, {"b", {"V1"}, "", ""}}, 2, 3), ErrorCode::EmptySelection);
  CHECK_CODE(compose(f, {{"a", {"V1o"}, "", ""}, {"b", {"V2"}, "", ""}}, 2, 3), ErrorCode::UnknownParent);
  CHECK_CODE(compose(f, {{"a", {"V1"}, "", ""}}, 2, 3), ErrorCode::ScenarioCountOutOfRange);

  f.resize(10);  // five visions
  auto partial = compose(f, {{"a", {"V1", "V2"}, "", ""}, {"b", {"V3", "V4"}, "", ""}}, 2, 3);
  CHECK(partial.scenarios.size() == 2);
  CHECK(partial.uncovered_visions == std::vector<std::string>{"V5"});
}

TEST_CASE("homologous grouping") {
  SimilarityConfig cfg;
  const std::vector<ScenarioDoc> docs{{"SC1", {"green harbour ferries"}},
                                      {"SC2", {"digital town hall"}},
                                      {"SC3", {"youth music festival"}}};
  auto clusters = group_homologous({{"G1", docs}, {"G2", docs}}, 3, cfg);
  REQUIRE(clusters.size() == 3);
  std::set<std::vector<std::string>> got;
  for (auto c : clusters) {
    std::sort(c.scenario_ids.begin(), c.scenario_ids.end());
    got.insert(c.scenario_ids);
    CHECK(c.cohesion == 1.0);
  }
  CHECK(got == std::set<std::vector<std::string>>{
                   {"G1/SC1", "G2/SC1"}, {"G1/SC2", "G2/SC2"}, {"G1/SC3", "G2/SC3"}});

  CHECK_CODE(group_homologous({{"G1", docs}}, 3, cfg), ErrorCode::SingleGroup);
  CHECK_CODE(group_homologous({{"G1", docs}, {"G2", docs}}, 5, cfg), ErrorCode::InvalidArgument);
}
