#include "support.hpp"

#include "fw/scenario.hpp"

using namespace fw;
using fwtest::Bench;

namespace {

Agenda with_limit(StepKind kind, std::int64_t seconds) {
  Agenda a = default_agenda();
  for (auto& phase : a.phases)
    for (auto& s : phase.steps)
      if (s.kind == kind) s.time_limit_s = seconds;
  return a;
}

std::vector<std::string> numbered(const std::string& stem, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(stem + " " + std::to_string(i));
  return out;
}

}  // namespace

TEST_CASE("create appends or reorders the catch-all area") {
  Bench five(0, default_agenda(),
             {"Political/institutional", "Physical/environmental", "Social-cultural", "Economic", "Others"});
  CHECK(five.state().issue_areas.size() == 5);
  CHECK(five.state().issue_areas.back() == "Others");

  Bench one(0, default_agenda(), {"Economic"});
  CHECK(one.state().issue_areas == std::vector<std::string>{"Economic", "Others"});

  Agenda bad = default_agenda();
  bad.phases[1].steps.pop_back();  // DelphiGate
  EventLog log;
  ManualClock clock;
  Engine e(log, clock, seeded_tokens(1));
  CHECK_CODE(e.create("W1", "t", bad, {"Economic"}), ErrorCode::InvalidAgenda);
}

TEST_CASE("registration") {
  Bench b(11);
  for (int i = 0; i < 11; ++i) CHECK(b.alias[i] == "P" + std::to_string(i + 1));
  CHECK(b.state().facilitator()->alias == "P12");
  CHECK_CODE(b.engine.register_participant(Role::Facilitator, std::nullopt), ErrorCode::DuplicateFacilitator);
  b.to_critique();
  CHECK_CODE(b.engine.register_participant(Role::Stakeholder, std::nullopt), ErrorCode::WrongPhase);
  CHECK_CODE(b.engine.advance_phase(b.tok[0]), ErrorCode::NotFacilitator);
  CHECK_CODE(b.engine.advance_phase("nope"), ErrorCode::Unauthorized);
}

TEST_CASE("step ordering") {
  Bench b(2);
  b.to_critique();
  CHECK_CODE(b.open(StepKind::CutOff), ErrorCode::OutOfOrder);
  b.open(StepKind::IdeaEntry);
  CHECK_CODE(b.open(StepKind::Merge), ErrorCode::AlreadyOpen);
  b.close();
  b.open(StepKind::Merge);
  CHECK(b.state().open_step()->state == StepState::Open);
  CHECK_CODE(b.engine.advance_phase(b.fac), ErrorCode::StepsIncomplete);
  b.close();
  CHECK_CODE(b.close(), ErrorCode::NothingOpen);
  b.open(StepKind::Rating);
  CHECK_CODE(b.open(StepKind::Ranking), ErrorCode::AlreadyOpen);
}

TEST_CASE("idea entry") {
  Bench b(2);
  b.to_critique();
  b.open(StepKind::IdeaEntry);
  auto r = b.engine.submit_ideas(b.tok[0], {{"clean river", {}}, {"clean river", {}}, {"bus lanes", "Economic"}});
  CHECK(r.accepted.size() == 2);
  CHECK(r.rejected_duplicates == std::vector<std::size_t>{1});
  auto again = b.engine.submit_ideas(b.tok[0], {{"clean river", {}}});
  CHECK(again.accepted.empty());
  // the same text from another participant is a separate statement
  CHECK(b.engine.submit_ideas(b.tok[1], {{"clean river", {}}}).accepted.size() == 1);
  CHECK(b.state().statements.size() == 3);

  CHECK_CODE(b.engine.submit_ideas(b.tok[0], {{"", {}}}), ErrorCode::EmptyText);
  CHECK_CODE(b.engine.submit_ideas(b.tok[0], {{std::string(2001, 'x'), {}}}), ErrorCode::TextTooLong);
  CHECK_NOTHROW(b.engine.submit_ideas(b.tok[0], {{std::string(2000, 'y'), {}}}));
  CHECK_CODE(b.engine.submit_ideas(b.tok[0], {{"x", "Nowhere"}}), ErrorCode::UnknownArea);
  CHECK_CODE(b.engine.submit_ideas(b.fac, {{"x", {}}}), ErrorCode::NotStakeholder);
}

TEST_CASE("submissions after the deadline are refused") {
  Bench b(1, with_limit(StepKind::IdeaEntry, 60));
  b.to_critique();
  b.open(StepKind::IdeaEntry);
  b.engine.submit_ideas(b.tok[0], {{"early", {}}});
  b.clock.advance(60'000);
  CHECK_CODE(b.engine.submit_ideas(b.tok[0], {{"late", {}}}), ErrorCode::StepClosed);
  const Step& s = b.state().steps.back();
  CHECK(s.state == StepState::Closed);
  CHECK(s.auto_closed);
}

TEST_CASE("merge plans") {
  SUBCASE("identity close makes every raw statement active") {
    Bench b(2);
    auto ids = b.seed_items({numbered("idea", 3), numbered("other", 3)});
    CHECK(ids.size() == 6);
    CHECK(b.state().reduction_rate == 0.0);
  }
  SUBCASE("explicit groups") {
    Bench b(2);
    b.to_critique();
    b.open(StepKind::IdeaEntry);
    b.engine.submit_ideas(b.tok[0], {{"a", {}}, {"b", {}}, {"c", {}}});
    b.engine.submit_ideas(b.tok[1], {{"d", {}}});
    b.close();
    b.open(StepKind::Merge);
    CHECK_CODE(b.engine.apply_merge_plan(b.fac, {{{"S1", "S2"}, "ab", "Others"}, {{"S2", "S3"}, "bc", "Others"}}),
               ErrorCode::OverlappingGroups);
    CHECK_CODE(b.engine.apply_merge_plan(b.fac, {{{"S9"}, "x", "Others"}}), ErrorCode::UnknownStatement);
    auto m = b.engine.apply_merge_plan(b.fac, {{{"S1", "S2"}, "a and b", "Economic"}});
    CHECK(m.active_count == 3);
    REQUIRE(m.reduction_rate.has_value());
    CHECK(*m.reduction_rate == doctest::Approx(0.25));
    const Statement* merged = b.state().statement(m.issue_ids[0]);
    CHECK(merged->merged_from == std::vector<std::string>{"S1", "S2"});
    CHECK(b.state().statement("S1")->status == StatementStatus::Merged);
  }
}

TEST_CASE("ratings and rankings") {
  Bench b(2);
  b.seed_items({numbered("idea", 11), {"solo"}});
  const auto items = b.state().active_item_ids();
  b.open(StepKind::Rating);
  b.engine.submit_ratings(b.tok[0], {{items[0], 5}});
  CHECK_CODE(b.engine.submit_ratings(b.tok[0], {{items[0], 6}}), ErrorCode::OutOfScale);
  CHECK_CODE(b.engine.submit_ratings(b.tok[0], {{"S999", 1}}), ErrorCode::UnknownItem);
  b.engine.submit_ratings(b.tok[0], {{items[0], 2}, {items[1], 4}});
  const auto& r = *b.state().current_round();
  CHECK(r.ratings.at(b.alias[0]).at(items[0]) == 2);
  CHECK(r.ratings.at(b.alias[0]).size() == 2);
  b.close();

  b.open(StepKind::Ranking);
  std::vector<std::string> eleven(items.begin(), items.begin() + 11);
  CHECK_CODE(b.engine.submit_ranking(b.tok[0], eleven), ErrorCode::TooMany);
  CHECK_CODE(b.engine.submit_ranking(b.tok[0], {items[0], items[0], items[1]}), ErrorCode::DuplicateItem);
  std::vector<std::string> ten(items.begin(), items.begin() + 10);
  b.engine.submit_ranking(b.tok[0], ten);
  auto res = b.close();
  CHECK(res.borda.at(items[0]) == 10);
  CHECK(res.borda.at(items[9]) == 1);
}

TEST_CASE("zero support and cut-off eliminate through the round") {
  Bench b(2);
  auto items = b.seed_items({{"A", "B"}, {"C", "D"}});
  REQUIRE(items.size() == 4);
  b.open(StepKind::Rating);
  b.engine.submit_ratings(b.tok[0], {{items[0], 5}, {items[1], 4}, {items[2], 0}, {items[3], 3}});
  auto rating = b.close();
  CHECK(rating.mean_rating.at(items[0]) == 5.0);
  CHECK(rating.snapshots == 1);

  b.open(StepKind::Ranking);
  b.engine.submit_ranking(b.tok[0], {items[0], items[1]});
  b.engine.submit_ranking(b.tok[1], {items[1], items[0]});
  auto ranking = b.close();
  CHECK(ranking.eliminated == std::vector<std::string>{items[2]});  // unranked and mean 0
  CHECK(b.state().active_item_ids().size() == 3);

  b.open(StepKind::CutOff);
  b.engine.configure_cutoff(b.fac, 1);
  auto cut = b.close();
  // items[0] and items[1] tie at the top, so only items[3] goes
  CHECK(cut.eliminated == std::vector<std::string>{items[3]});
  CHECK(b.state().active_item_ids() == std::vector<std::string>{items[0], items[1]});
}

TEST_CASE("vacuous rating close") {
  Bench b(1);
  b.seed_items({{"A", "B"}});
  b.open(StepKind::Rating);
  auto r = b.close();
  CHECK(r.mean_rating.empty());
  CHECK(r.snapshots == 0);
}

TEST_CASE("gate iterates then stops on budget and carries the list") {
  Bench b(2);
  auto items = b.seed_items({{"A", "B"}, {"C"}});
  for (int round = 1; round <= 2; ++round) {
    b.open(StepKind::Rating);
    b.engine.submit_ratings(b.tok[0], {{items[0], 3}, {items[1], 3}, {items[2], 3}});
    b.close();
    b.open(StepKind::Ranking);
    b.engine.submit_ranking(b.tok[0], {items[0], items[1], items[2]});
    b.engine.submit_ranking(b.tok[1], {items[2], items[1], items[0]});
    b.close();
    b.open(StepKind::CutOff);
    b.close();
    b.open(StepKind::Chat);
    b.close();
    CHECK_CODE(b.engine.delphi_gate(b.fac), ErrorCode::NoReport);
    b.open(StepKind::DelphiGate);
    CHECK_CODE(b.engine.advance_phase(b.fac), ErrorCode::StepsIncomplete);
    const auto d = b.engine.delphi_gate(b.fac);
    CHECK(d == (round == 1 ? GateDecision::Iterate : GateDecision::BudgetStop));
    CHECK(b.state().current_round()->convergence->kendall_w == doctest::Approx(0.0));
  }
  CHECK(b.state().critique_outcome == GateDecision::BudgetStop);
  CHECK(b.state().active_item_ids().size() == 3);
  b.engine.advance_phase(b.fac);
  CHECK(b.state().phase == Phase::Fantasy);
}

TEST_CASE("perfect agreement converges") {
  Bench b(2);
  auto items = b.seed_items({{"A", "B"}, {"C"}});
  b.open(StepKind::Rating);
  b.close();
  b.open(StepKind::Ranking);
  b.engine.submit_ranking(b.tok[0], items);
  b.engine.submit_ranking(b.tok[1], items);
  b.close();
  b.open(StepKind::CutOff);
  b.close();
  b.open(StepKind::Chat);
  b.close();
  b.open(StepKind::DelphiGate);
  CHECK(b.engine.delphi_gate(b.fac) == GateDecision::Converged);
}

TEST_CASE("chat") {
  Bench b(2, with_limit(StepKind::Chat, 30));
  b.seed_items({{"A"}, {"B"}});
  for (StepKind k : {StepKind::Rating, StepKind::Ranking, StepKind::CutOff}) {
    b.open(k);
    b.close();
  }
  b.open(StepKind::Chat);
  auto m1 = b.engine.post_chat(b.tok[0], "one");
  b.engine.post_chat(b.tok[1], "two");
  auto m3 = b.engine.post_chat(b.tok[0], "three");
  auto all = b.engine.fetch_chat(0);
  REQUIRE(all.size() == 3);
  CHECK(all[0].text == "one");
  CHECK(all[2].text == "three");
  CHECK(m1.seq < m3.seq);
  CHECK(b.engine.fetch_chat(all[1].seq).size() == 1);
  CHECK_CODE(b.engine.post_chat(b.tok[0], std::string(1001, 'x')), ErrorCode::TextTooLong);
  b.clock.advance(30'000);
  CHECK_CODE(b.engine.post_chat(b.tok[0], "late"), ErrorCode::StepClosed);
}

TEST_CASE("self assessment") {
  Bench b(1);
  b.seed_items({{"A", "B"}});
  for (StepKind k : {StepKind::Rating, StepKind::Ranking, StepKind::CutOff, StepKind::Chat}) {
    b.open(k);
    b.close();
  }
  b.open(StepKind::SelfAssessment);
  b.engine.submit_self_assessment(b.tok[0], 0, "");
  b.engine.submit_self_assessment(b.tok[0], 5, "learned a lot");
  CHECK_CODE(b.engine.submit_self_assessment(b.tok[0], 7, ""), ErrorCode::OutOfScale);
  // one answer per participant and step; the latest wins
  REQUIRE(b.state().self_assessments.size() == 1);
  CHECK(b.state().self_assessments[0].knowledge_gain == 5);
}

TEST_CASE("fantasy and implementation") {
  Bench b(2);
  auto items = b.seed_items({{"A", "B"}, {"C"}});
  b.open(StepKind::Rating);
  b.close();
  b.open(StepKind::Ranking);
  b.engine.submit_ranking(b.tok[0], items);
  b.engine.submit_ranking(b.tok[1], items);
  b.close();
  b.open(StepKind::CutOff);
  b.close();
  b.open(StepKind::Chat);
  b.close();
  b.open(StepKind::DelphiGate);
  b.engine.delphi_gate(b.fac);
  b.engine.advance_phase(b.fac);

  CHECK_CODE(b.engine.add_node(b.tok[0], NodeKind::Vision, "car-free centre", std::nullopt), ErrorCode::StepClosed);
  b.open(StepKind::TreeBuild);
  auto v1 = b.engine.add_node(b.tok[0], NodeKind::Vision, "car-free centre", std::nullopt);
  auto v2 = b.engine.add_node(b.tok[1], NodeKind::Vision, "solar roofs", std::nullopt);
  CHECK_FALSE(v1.warning.has_value());
  CHECK_CODE(b.engine.add_node(b.tok[0], NodeKind::Action, "x", std::nullopt), ErrorCode::WrongPhase);
  b.close();
  b.open(StepKind::Chat);
  b.close();
  b.engine.advance_phase(b.fac);
  CHECK(b.state().phase == Phase::Implementation);

  b.open(StepKind::TreeBuild);
  CHECK_CODE(b.engine.add_node(b.tok[0], NodeKind::Resource, "x", v1.node.id), ErrorCode::KindOrderViolation);
  auto o = b.engine.add_node(b.tok[0], NodeKind::Obstacle, "traffic lobby", v1.node.id);
  auto a = b.engine.add_node(b.tok[0], NodeKind::Action, "pilot week", o.node.id);
  b.engine.add_node(b.tok[0], NodeKind::Resource, "city budget", a.node.id);
  b.close();
  b.open(StepKind::ScenarioCompose);
  auto comp = b.engine.compose_scenarios(
      b.fac, {{"Mobility", {v1.node.id}, "G1", ""}, {"Energy", {v2.node.id}, "G2", ""}});
  CHECK(comp.scenarios.size() == 2);
  CHECK(comp.scenarios[0].member_nodes.size() == 4);
  b.close();
  CHECK(b.state().scenarios.size() == 2);
  b.engine.advance_phase(b.fac);
  CHECK(b.state().phase == Phase::Closed);
  CHECK(b.state().phase_history.size() == 5);
}

TEST_CASE("utf8 length") {
  CHECK(utf8_length("abc") == 3u);
  CHECK(utf8_length("\xc3\xa7\xc3\xb6") == 2u);
  CHECK_FALSE(utf8_length("\xff").has_value());
}
