#pragma once

// Synthetic participants that drive a workshop through the public API.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fw/http.hpp"

namespace fw::sim {

enum class PolicyKind { Random, Conformist, Stubborn, SelfBiased };

std::string_view to_string(PolicyKind k) noexcept;
PolicyKind parse_policy_kind(std::string_view s);

struct AgentPolicy {
  PolicyKind kind = PolicyKind::Random;
  std::uint64_t seed = 0;
  double conformity = 0.5;  // Conformist only
  std::vector<std::string> criteria_script;  // criterion per round, cycled
};

// What an agent observes when asked to act.
struct StepContext {
  StepKind kind = StepKind::Rating;
  int round = 1;
  int scale_max = 5;
  int top_k = 10;
  std::vector<std::string> items;                // active items this round
  std::map<std::string, double> opinion;         // the agent's private prior per item
  std::map<std::string, double> group_mean;      // last round's mean ratings (empty in round 1)
  std::map<std::string, double> group_borda;     // last round's Borda scores
  std::map<std::string, int> own_ratings;        // most recent own rating vector
  std::set<std::string> own_items;               // items built from the agent's own ideas
};

struct Submission {
  std::map<std::string, int> ratings;     // Rating steps
  std::vector<std::string> ranking;       // Ranking steps
  std::optional<std::string> criterion;
};

// Pure function of (policy, context). Throws UnknownStepKind for steps other
// than Rating and Ranking.
Submission agent_act(const AgentPolicy& policy, const StepContext& context);

struct PolicyShare {
  PolicyKind kind = PolicyKind::Random;
  double fraction = 1.0;
  double conformity = 0.5;
};

struct SimScenario {
  int participants = 8;
  std::vector<int> ideas;  // per participant; empty = ideas_each for everyone
  int ideas_each = 3;
  std::optional<int> merge_target;  // list size after the merge; nullopt = identity merge
  bool ga_areas = true;             // assign areas with the GA before merging
  int max_rounds = 2;
  double w_min = 0.6;
  int top_k = 10;
  std::optional<int> cutoff_n;
  bool zero_support = true;
  double opinion_noise = 1.5;  // half-width of the per-agent uniform noise
  // Shared item salience is scale_max * u^salience_exponent, u uniform from
  // the item text; exponents below 1 skew items toward high salience.
  double salience_exponent = 1.0;
  std::vector<PolicyShare> mix = {{PolicyKind::Random, 1.0, 0.5}};
  std::vector<std::string> criteria;  // enables tagging when non-empty
  std::vector<std::string> criteria_script;
  std::uint64_t seed = 1;
};

struct RoundMetrics {
  int round = 0;
  double kendall_w = 0.0;
  double eliminated_fraction = 0.0;
  std::size_t items = 0;          // items rated this round
  std::size_t zero_support = 0;   // eliminated at Ranking close
  std::size_t cutoff = 0;         // eliminated at CutOff close
  std::size_t active_after = 0;
  GateDecision decision = GateDecision::Iterate;
};

struct SimResult {
  std::string workshop_id;
  std::vector<Event> trace;
  std::string state_hash;
  std::size_t raw_ideas = 0;
  std::size_t merged_list = 0;
  std::optional<double> reduction_rate;
  std::vector<RoundMetrics> rounds;
  std::size_t final_list = 0;
  GateDecision outcome = GateDecision::Iterate;
};

// Rabat-shaped workshop: 11 stakeholders with 6 or 5 ideas each (63), merge to
// 40, cut-off 17, two-round budget, Stubborn-heavy mix. The seed that
// reproduces the reported counts was found by tools/seed_search.
SimScenario rabat_scenario(std::uint64_t seed);
inline constexpr std::uint64_t kRabatSeed = 2;

// 8 Conformist agents, 12 items (no merge, no cut-off), 5-round budget. The
// opinion noise is wide enough that round 1 usually starts below w_min.
SimScenario conformist_scenario(std::uint64_t seed, double conformity = 0.8);

// Throws InvalidArgument for an invalid scenario; API errors are rethrown
// with the stage at which they happened prepended to the message.
void validate_scenario(const SimScenario& scenario);

// Against a fresh in-process service with a manual clock and seeded tokens.
SimResult run_simulation(const SimScenario& scenario);
// Against an existing service behind `client` (in-process or HTTP).
SimResult run_simulation(const SimScenario& scenario, ApiClient& client);

// Policies per participant, in participant order, from the scenario mix
// (largest-remainder apportionment).
std::vector<AgentPolicy> assign_policies(const SimScenario& scenario);

// Idea texts of one participant; distinct per participant.
std::vector<std::string> generate_ideas(std::uint64_t seed, int participant, int count);

// Probability that a strict majority of m independent voters, each correct
// with probability p, is correct. Throws EvenVoters, InvalidArgument.
double condorcet_majority_probability(int m, double p);

}  // namespace fw::sim
