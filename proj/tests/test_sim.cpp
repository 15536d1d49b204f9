#include <cmath>

#include "support.hpp"

#include "fw/analytics.hpp"
#include "fw/sim.hpp"

using namespace fw;
using namespace fw::sim;

namespace {

StepContext rating_context(int round) {
  StepContext c;
  c.kind = StepKind::Rating;
  c.round = round;
  c.items = {"S1", "S2", "S3", "S4"};
  c.opinion = {{"S1", 4.2}, {"S2", 1.1}, {"S3", 2.6}, {"S4", 0.4}};
  return c;
}

// Majority probability by enumerating every voter outcome.
double enumerate_majority(int m, double p) {
  double total = 0;
  for (unsigned mask = 0; mask < (1u << m); ++mask) {
    const int right = __builtin_popcount(mask);
    if (2 * right > m) total += std::pow(p, right) * std::pow(1 - p, m - right);
  }
  return total;
}

}  // namespace

TEST_CASE("policy names") {
  for (auto k : {PolicyKind::Random, PolicyKind::Conformist, PolicyKind::Stubborn, PolicyKind::SelfBiased})
    CHECK(parse_policy_kind(to_string(k)) == k);
  CHECK_CODE(parse_policy_kind("Contrarian"), ErrorCode::InvalidArgument);
}

TEST_CASE("stubborn agents repeat themselves") {
  AgentPolicy p{PolicyKind::Stubborn, 3, 0.5, {}};
  auto first = agent_act(p, rating_context(1));
  auto ctx = rating_context(2);
  ctx.own_ratings = first.ratings;
  ctx.group_mean = {{"S1", 0}, {"S2", 5}, {"S3", 5}, {"S4", 5}};
  CHECK(agent_act(p, ctx).ratings == first.ratings);
}

TEST_CASE("a fully conformist agent adopts the rounded group mean") {
  AgentPolicy p{PolicyKind::Conformist, 3, 1.0, {}};
  auto ctx = rating_context(2);
  ctx.own_ratings = {{"S1", 4}, {"S2", 1}, {"S3", 3}, {"S4", 0}};
  ctx.group_mean = {{"S1", 1.2}, {"S2", 3.7}, {"S3", 2.4}, {"S4", 4.9}};
  auto s = agent_act(p, ctx);
  CHECK(s.ratings == std::map<std::string, int>{{"S1", 1}, {"S2", 4}, {"S3", 2}, {"S4", 5}});
}

TEST_CASE("random agents are reproducible and in range") {
  AgentPolicy p{PolicyKind::Random, 77, 0.5, {}};
  auto a = agent_act(p, rating_context(1));
  CHECK(a.ratings == agent_act(p, rating_context(1)).ratings);
  for (const auto& [item, v] : a.ratings) CHECK((v >= 0 && v <= 5));

  auto rank = rating_context(1);
  rank.kind = StepKind::Ranking;
  rank.top_k = 3;
  rank.own_ratings = a.ratings;
  auto r = agent_act(p, rank);
  CHECK(r.ranking.size() == 3);
  CHECK(r.ranking == agent_act(p, rank).ranking);

  auto chat = rating_context(1);
  chat.kind = StepKind::Chat;
  CHECK_CODE(agent_act(p, chat), ErrorCode::UnknownStepKind);
}

TEST_CASE("self-biased agents push their own items") {
  AgentPolicy p{PolicyKind::SelfBiased, 5, 0.5, {}};
  auto ctx = rating_context(1);
  ctx.own_items = {"S4"};
  CHECK(agent_act(p, ctx).ratings.at("S4") == 5);
  ctx.kind = StepKind::Ranking;
  ctx.own_ratings = agent_act(p, rating_context(1)).ratings;
  ctx.own_ratings["S4"] = 5;
  CHECK(agent_act(p, ctx).ranking.front() == "S4");
}

TEST_CASE("policy apportionment") {
  SimScenario sc = rabat_scenario(1);
  auto ps = assign_policies(sc);
  REQUIRE(ps.size() == 11);
  int stubborn = 0;
  for (const auto& p : ps) stubborn += p.kind == PolicyKind::Stubborn;
  CHECK(stubborn == 7);
}

TEST_CASE("scenario validation") {
  SimScenario sc;
  sc.participants = 0;
  CHECK_CODE(validate_scenario(sc), ErrorCode::InvalidArgument);
  sc = SimScenario{};
  sc.mix = {{PolicyKind::Random, 0.5, 0.5}};
  CHECK_CODE(validate_scenario(sc), ErrorCode::InvalidArgument);
}

TEST_CASE("runs are reproducible") {
  SimScenario sc = conformist_scenario(9);
  sc.max_rounds = 2;
  auto a = run_simulation(sc);
  auto b = run_simulation(sc);
  CHECK(a.state_hash == b.state_hash);
  CHECK(a.trace == b.trace);
  CHECK(replay(a.trace).hash == a.state_hash);
}

TEST_CASE("conformists converge before the budget") {
  auto r = run_simulation(conformist_scenario(7));
  CHECK(r.outcome == GateDecision::Converged);
  CHECK(r.rounds.size() < 5);
  CHECK(r.rounds.back().kendall_w >= 0.6);
}

TEST_CASE("a zero-round budget stops at the first gate") {
  SimScenario sc = conformist_scenario(3);
  sc.max_rounds = 0;
  sc.mix = {{PolicyKind::Random, 1.0, 0.5}};
  auto r = run_simulation(sc);
  REQUIRE(r.rounds.size() == 1);
  CHECK(r.rounds[0].kendall_w < 0.6);
  CHECK(r.outcome == GateDecision::BudgetStop);
}

TEST_CASE("scripted criteria shift shows up in the analytics") {
  SimScenario sc = conformist_scenario(4);
  sc.mix = {{PolicyKind::Random, 1.0, 0.5}};
  sc.max_rounds = 2;
  sc.criteria = {"economic", "social"};
  sc.criteria_script = {"economic", "social"};
  auto r = run_simulation(sc);
  REQUIRE(r.rounds.size() == 2);
  auto shift = analytics::criteria_shift(replay(r.trace).state);
  REQUIRE(shift.size() == 2);
  CHECK(shift[0].dominant == "economic");
  CHECK(shift[1].dominant == "social");
}

TEST_CASE("the harness runs unchanged over HTTP") {
  WorkshopService svc;
  ApiRouter router(svc);
  HttpServer server(router);
  const int port = server.start("127.0.0.1", 0);
  HttpClient http("http://127.0.0.1:" + std::to_string(port));
  SimScenario sc = conformist_scenario(11);
  sc.max_rounds = 2;
  auto remote = run_simulation(sc, http);
  auto local = run_simulation(sc);
  server.stop();
  REQUIRE(remote.rounds.size() == local.rounds.size());
  for (std::size_t i = 0; i < local.rounds.size(); ++i)
    CHECK(remote.rounds[i].kendall_w == local.rounds[i].kendall_w);
  CHECK(remote.final_list == local.final_list);
}

TEST_CASE("condorcet jury probability") {
  CHECK(std::abs(condorcet_majority_probability(3, 0.6) - 0.648) < 1e-9);
  CHECK(condorcet_majority_probability(1, 0.37) == 0.37);
  CHECK(condorcet_majority_probability(3, 0.5) == 0.5);
  for (int m = 1; m <= 15; m += 2)
    for (double p : {0.1, 0.45, 0.6, 0.9})
      CHECK(condorcet_majority_probability(m, p) == doctest::Approx(enumerate_majority(m, p)).epsilon(1e-12));
  CHECK_CODE(condorcet_majority_probability(4, 0.6), ErrorCode::EvenVoters);
  CHECK_CODE(condorcet_majority_probability(0, 0.6), ErrorCode::InvalidArgument);
  CHECK_CODE(condorcet_majority_probability(3, 1.5), ErrorCode::InvalidArgument);
}
