#include "support.hpp"

#include "fw/analytics.hpp"

using namespace fw;
using namespace fw::analytics;

namespace {

WorkshopState with_people(std::initializer_list<const char*> aliases) {
  WorkshopState s;
  for (const char* a : aliases) s.participants.push_back({a, Role::Stakeholder, std::nullopt, ""});
  return s;
}

BehaviorSnapshot snap(const char* alias, int round, StepKind kind, std::map<std::string, double> v) {
  return {alias, round, kind, std::move(v), 0};
}

}  // namespace

TEST_CASE("behavior series is ordered by round then step") {
  auto s = with_people({"P1", "P2"});
  s.snapshots = {snap("P1", 2, StepKind::Ranking, {}), snap("P1", 2, StepKind::Rating, {}),
                 snap("P1", 1, StepKind::Ranking, {}), snap("P1", 1, StepKind::Rating, {})};
  auto series = behavior_series(s, "P1");
  REQUIRE(series.size() == 4);
  CHECK(series[0].round == 1);
  CHECK(series[0].step_kind == StepKind::Rating);
  CHECK(series[3].round == 2);
  CHECK(series[3].step_kind == StepKind::Ranking);
  CHECK(behavior_series(s, "P2").empty());
  CHECK_CODE(behavior_series(s, "P9"), ErrorCode::UnknownAlias);
}

TEST_CASE("stability") {
  auto s = with_people({"P1", "P2", "P3"});
  s.snapshots = {snap("P1", 1, StepKind::Rating, {{"A", 1}, {"B", 5}}),
                 snap("P1", 2, StepKind::Rating, {{"A", 3}, {"B", 5}}),
                 snap("P2", 1, StepKind::Rating, {{"A", 2}}),
                 snap("P2", 2, StepKind::Rating, {{"A", 2}}),
                 snap("P3", 1, StepKind::Rating, {{"A", 2}})};
  CHECK(stability(s, "P1") == doctest::Approx(1.0));
  CHECK(stability(s, "P1", {"B"}) == 0.0);
  CHECK(stability(s, "P2") == 0.0);
  CHECK_CODE(stability(s, "P3"), ErrorCode::InsufficientHistory);
}

TEST_CASE("criteria distribution") {
  auto s = with_people({"P1", "P2", "P3", "P4"});
  CHECK_CODE(criteria_distribution(s, 1), ErrorCode::TaggingDisabled);
  s.agenda.criteria = {"econ", "social", "environment"};
  EvaluationRound r1;
  r1.index = 1;
  r1.ratings = {{"P1", {{"A", 1}}}, {"P2", {{"A", 1}}}, {"P3", {{"A", 1}}}};
  r1.criterion_tags = {{"P1", "econ"}, {"P2", "econ"}, {"P3", "social"}};
  EvaluationRound r2 = r1;
  r2.index = 2;
  r2.criterion_tags = {{"P1", "social"}, {"P2", "social"}, {"P3", "environment"}};
  EvaluationRound r3;
  r3.index = 3;
  r3.ratings = {{"P1", {{"A", 1}}}, {"P4", {{"A", 1}}}};
  s.rounds = {r1, r2, r3};

  auto d = criteria_distribution(s, 1);
  CHECK(d.fractions.at("econ") == doctest::Approx(2.0 / 3.0));
  CHECK(d.fractions.at("social") == doctest::Approx(1.0 / 3.0));
  CHECK(d.dominant == "econ");

  auto shift = criteria_shift(s);
  REQUIRE(shift.size() == 3);
  CHECK(shift[1].dominant == "social");
  CHECK(shift[2].fractions.empty());
  CHECK(shift[2].untagged == 2);
  CHECK_FALSE(shift[2].dominant.has_value());
}

TEST_CASE("knowledge gain") {
  WorkshopState s;
  Step a, b;
  a.id = "T7";
  a.kind = StepKind::SelfAssessment;
  b.id = "T14";
  b.kind = StepKind::SelfAssessment;
  s.steps = {a, b};
  auto empty = knowledge_gain_summary(s);
  REQUIRE(empty.per_step.size() == 2);
  CHECK_FALSE(empty.per_step[0].mean.has_value());

  s.self_assessments = {{"P1", "T7", 2, "", 0}, {"P2", "T7", 4, "", 0}, {"P1", "T14", 5, "", 0}};
  auto k = knowledge_gain_summary(s);
  CHECK(k.per_step[0].mean == 3.0);
  CHECK(k.per_step[0].count == 2);
  CHECK(k.per_step[1].mean == 5.0);
  CHECK(k.per_alias.at("P1") == std::vector<std::pair<std::string, int>>{{"T7", 2}, {"T14", 5}});
}
