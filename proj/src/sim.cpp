#include "fw/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "fw/agenda.hpp"
#include "fw/error.hpp"
#include "fw/rng.hpp"

namespace fw::sim {
namespace {

struct Topic {
  const char* area;
  std::array<const char*, 6> nouns;
};

// Idea vocabulary. Topics sharing nouns produce statements the merge
// suggestions can group.
constexpr std::array<Topic, 12> kTopics = {{
    {"Infrastructure", {"water", "pipes", "wells", "irrigation", "drainage", "supply"}},
    {"Infrastructure", {"roads", "buses", "transport", "traffic", "parking", "rail"}},
    {"Infrastructure", {"energy", "solar", "electricity", "grid", "lighting", "fuel"}},
    {"Environment", {"waste", "recycling", "pollution", "landfill", "cleanup", "litter"}},
    {"Environment", {"parks", "trees", "beaches", "coast", "gardens", "wetlands"}},
    {"Society", {"schools", "teachers", "literacy", "classrooms", "students", "training"}},
    {"Society", {"health", "clinics", "doctors", "nurses", "hospital", "medicine"}},
    {"Society", {"housing", "rent", "slums", "shelter", "building", "neighborhoods"}},
    {"Economy", {"jobs", "employment", "youth", "wages", "skills", "apprenticeships"}},
    {"Economy", {"tourism", "hotels", "visitors", "heritage", "markets", "crafts"}},
    {"Governance", {"council", "transparency", "budget", "participation", "corruption", "services"}},
    {"Governance", {"security", "police", "safety", "crime", "patrols", "justice"}},
}};

constexpr std::array<const char*, 8> kVerbs = {"Improve", "Expand", "Fund",    "Protect",
                                               "Modernize", "Reform", "Support", "Plan"};

const std::vector<std::string>& area_labels() {
  static const std::vector<std::string> labels = {"Infrastructure", "Environment", "Society", "Economy",
                                                  "Governance"};
  return labels;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int clamp_round(double v, int scale_max) {
  const double r = std::floor(v + 0.5);
  return static_cast<int>(std::clamp(r, 0.0, static_cast<double>(scale_max)));
}

double unit_of(std::uint64_t h) { return static_cast<double>(h >> 11) * 0x1.0p-53; }

// Picks the topic of an idea; used both for its text and its submitted area.
std::size_t idea_topic(std::uint64_t seed, int participant, int index) {
  Rng rng(mix_seed(mix_seed(seed, 0x1dea), static_cast<std::uint64_t>(participant) * 1000 + index));
  return static_cast<std::size_t>(rng.below(kTopics.size()));
}

// "<Verb> <noun>, <noun> and <noun>" with three distinct nouns of the topic.
std::string idea_text(std::uint64_t seed, int participant, int index, int attempt) {
  Rng rng(mix_seed(mix_seed(seed, 0x7e47),
                   (static_cast<std::uint64_t>(participant) * 1000 + index) * 64 + attempt));
  const Topic& t = kTopics[idea_topic(seed, participant, index)];
  std::array<std::size_t, 6> pick = {0, 1, 2, 3, 4, 5};
  rng.shuffle(pick);
  std::ostringstream out;
  out << kVerbs[rng.below(kVerbs.size())] << ' ' << t.nouns[pick[0]] << ", " << t.nouns[pick[1]] << " and "
      << t.nouns[pick[2]];
  return out.str();
}

Agenda sim_agenda(const SimScenario& sc) {
  Agenda a = default_agenda();
  a.policy.w_min = sc.w_min;
  a.policy.max_rounds = sc.max_rounds;
  a.top_k = sc.top_k;
  a.zero_support_rule = sc.zero_support;
  a.criteria = sc.criteria;
  a.similarity.stopwords = {"and", "the", "of", "for", "in", "to", "with"};
  for (auto& phase : a.phases) {
    for (auto& step : phase.steps) {
      if (step.kind == StepKind::CutOff) step.cutoff_n = sc.cutoff_n;
    }
  }
  for (const auto& label : area_labels()) {
    AreaProfile p;
    p.label = label;
    for (const auto& t : kTopics) {
      if (label == t.area) p.keywords.insert(p.keywords.end(), t.nouns.begin(), t.nouns.end());
    }
    a.area_profiles.push_back(std::move(p));
  }
  return a;
}

struct Agent {
  AgentPolicy policy;
  std::string alias;
  std::string token;
  std::set<std::string> own_statements;
  std::map<std::string, int> last_ratings;
};

template <typename Fn>
decltype(auto) at_stage(const std::string& stage, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), "at " + stage + ": " + e.what());
  }
}

}  // namespace

std::string_view to_string(PolicyKind k) noexcept {
  switch (k) {
    case PolicyKind::Random:
      return "Random";
    case PolicyKind::Conformist:
      return "Conformist";
    case PolicyKind::Stubborn:
      return "Stubborn";
    case PolicyKind::SelfBiased:
      return "SelfBiased";
  }
  return "Random";
}

PolicyKind parse_policy_kind(std::string_view s) {
  for (PolicyKind k : {PolicyKind::Random, PolicyKind::Conformist, PolicyKind::Stubborn, PolicyKind::SelfBiased}) {
    if (to_string(k) == s) return k;
  }
  fail(ErrorCode::InvalidArgument, "unknown policy " + std::string(s));
}

Submission agent_act(const AgentPolicy& policy, const StepContext& ctx) {
  if (ctx.kind != StepKind::Rating && ctx.kind != StepKind::Ranking) {
    fail(ErrorCode::UnknownStepKind, "agents act only in Rating and Ranking steps, not " +
                                         std::string(fw::to_string(ctx.kind)));
  }
  Rng rng(mix_seed(policy.seed, static_cast<std::uint64_t>(ctx.round) * 16 + static_cast<std::uint64_t>(ctx.kind)));
  auto prior = [&](const std::string& item) {
    auto it = ctx.own_ratings.find(item);
    if (it != ctx.own_ratings.end()) return it->second;
    auto op = ctx.opinion.find(item);
    return clamp_round(op == ctx.opinion.end() ? 0.0 : op->second, ctx.scale_max);
  };

  Submission out;
  if (!policy.criteria_script.empty()) {
    out.criterion = policy.criteria_script[static_cast<std::size_t>(ctx.round - 1) % policy.criteria_script.size()];
  }

  if (ctx.kind == StepKind::Rating) {
    for (const auto& item : ctx.items) {
      int v = 0;
      switch (policy.kind) {
        case PolicyKind::Random:
          v = static_cast<int>(rng.between(0, ctx.scale_max));
          break;
        case PolicyKind::Conformist: {
          const double base = prior(item);
          auto m = ctx.group_mean.find(item);
          v = m == ctx.group_mean.end() ? static_cast<int>(base)
                                        : clamp_round(base + policy.conformity * (m->second - base), ctx.scale_max);
          break;
        }
        case PolicyKind::Stubborn:
          v = prior(item);
          break;
        case PolicyKind::SelfBiased:
          v = ctx.own_items.count(item) != 0 ? ctx.scale_max : static_cast<int>(rng.between(0, ctx.scale_max));
          break;
      }
      out.ratings[item] = v;
    }
    return out;
  }

  // Ranking: order by the agent's current ratings, policy-specific tie-break.
  std::vector<std::string> order = ctx.items;
  std::vector<double> tiebreak(order.size(), 0.0);
  std::map<std::string, double> key2;
  switch (policy.kind) {
    case PolicyKind::Random:
    case PolicyKind::SelfBiased:
      rng.shuffle(order);
      for (std::size_t i = 0; i < order.size(); ++i) key2[order[i]] = -static_cast<double>(i);
      break;
    case PolicyKind::Conformist:
      for (const auto& i : order) {
        auto b = ctx.group_borda.find(i);
        key2[i] = b == ctx.group_borda.end() ? 0.0 : b->second;
      }
      break;
    case PolicyKind::Stubborn:
      for (const auto& i : order) {
        auto op = ctx.opinion.find(i);
        key2[i] = op == ctx.opinion.end() ? 0.0 : op->second;
      }
      break;
  }
  auto key1 = [&](const std::string& i) {
    double k = prior(i);
    if (policy.kind == PolicyKind::SelfBiased && ctx.own_items.count(i) != 0) k += 100.0;
    return k;
  };
  std::stable_sort(order.begin(), order.end(), [&](const std::string& a, const std::string& b) {
    const double ka = key1(a);
    const double kb = key1(b);
    if (ka != kb) return ka > kb;
    if (key2[a] != key2[b]) return key2[a] > key2[b];
    return a < b;
  });
  order.resize(std::min(order.size(), static_cast<std::size_t>(std::max(ctx.top_k, 0))));
  out.ranking = std::move(order);
  return out;
}

SimScenario rabat_scenario(std::uint64_t seed) {
  SimScenario sc;
  sc.participants = 11;
  sc.ideas = {6, 6, 6, 6, 6, 6, 6, 6, 5, 5, 5};
  sc.merge_target = 40;
  sc.max_rounds = 2;
  sc.cutoff_n = 17;
  sc.salience_exponent = 1.4;
  sc.mix = {{PolicyKind::Stubborn, 7.0 / 11.0, 0.5},
            {PolicyKind::Random, 2.0 / 11.0, 0.5},
            {PolicyKind::Conformist, 2.0 / 11.0, 0.5}};
  sc.seed = seed;
  return sc;
}

SimScenario conformist_scenario(std::uint64_t seed, double conformity) {
  SimScenario sc;
  sc.participants = 8;
  sc.ideas = {2, 2, 2, 2, 1, 1, 1, 1};
  sc.max_rounds = 5;
  sc.opinion_noise = 3.0;
  sc.mix = {{PolicyKind::Conformist, 1.0, conformity}};
  sc.seed = seed;
  return sc;
}

void validate_scenario(const SimScenario& sc) {
  if (sc.participants < 1) fail(ErrorCode::InvalidArgument, "participants must be positive");
  if (!sc.ideas.empty() && static_cast<int>(sc.ideas.size()) != sc.participants) {
    fail(ErrorCode::InvalidArgument, "ideas must list one count per participant");
  }
  for (int n : sc.ideas) {
    if (n < 1) fail(ErrorCode::InvalidArgument, "idea counts must be positive");
  }
  if (sc.ideas.empty() && sc.ideas_each < 1) fail(ErrorCode::InvalidArgument, "idea counts must be positive");
  if (sc.mix.empty()) fail(ErrorCode::InvalidArgument, "policy mix is empty");
  double total = 0.0;
  for (const auto& s : sc.mix) {
    if (s.fraction < 0.0 || s.conformity < 0.0 || s.conformity > 1.0) {
      fail(ErrorCode::InvalidArgument, "policy mix parameters out of range");
    }
    total += s.fraction;
  }
  if (std::abs(total - 1.0) > 1e-9) fail(ErrorCode::InvalidArgument, "policy mix fractions must sum to 1");
  if (sc.merge_target && *sc.merge_target < 1) fail(ErrorCode::InvalidArgument, "merge target must be positive");
  if (sc.max_rounds < 0) fail(ErrorCode::InvalidArgument, "max_rounds must be non-negative");
}

std::vector<AgentPolicy> assign_policies(const SimScenario& sc) {
  validate_scenario(sc);
  const auto n = static_cast<std::size_t>(sc.participants);
  std::vector<std::size_t> counts(sc.mix.size());
  std::vector<std::pair<double, std::size_t>> remainders;
  std::size_t used = 0;
  for (std::size_t i = 0; i < sc.mix.size(); ++i) {
    const double exact = sc.mix[i].fraction * static_cast<double>(n);
    counts[i] = static_cast<std::size_t>(std::floor(exact));
    used += counts[i];
    remainders.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t k = 0; used < n; ++k, ++used) ++counts[remainders[k % remainders.size()].second];

  std::vector<AgentPolicy> out;
  for (std::size_t i = 0; i < sc.mix.size(); ++i) {
    for (std::size_t c = 0; c < counts[i]; ++c) {
      AgentPolicy p;
      p.kind = sc.mix[i].kind;
      p.conformity = sc.mix[i].conformity;
      p.seed = mix_seed(sc.seed, 0xa9e0 + out.size());
      p.criteria_script = sc.criteria_script;
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::vector<std::string> generate_ideas(std::uint64_t seed, int participant, int count) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (int i = 0; i < count; ++i) {
    for (int attempt = 0;; ++attempt) {
      std::string t = idea_text(seed, participant, i, attempt);
      if (attempt >= 63) t += " (" + std::to_string(i + 1) + ")";
      if (seen.insert(t).second) {
        out.push_back(std::move(t));
        break;
      }
    }
  }
  return out;
}

SimResult run_simulation(const SimScenario& sc) {
  ManualClock clock(1'700'000'000'000, 1000);
  WorkshopService::Options opts;
  opts.clock = &clock;
  const std::uint64_t token_seed = mix_seed(sc.seed, 0x70c3);
  opts.tokens = [token_seed](const std::string& id) { return seeded_tokens(mix_seed(token_seed, fnv1a(id))); };
  WorkshopService service(opts);
  ApiRouter router(service);
  InProcessClient client(router);
  return run_simulation(sc, client);
}

SimResult run_simulation(const SimScenario& sc, ApiClient& api) {
  auto policies = assign_policies(sc);
  const Agenda agenda = sim_agenda(sc);
  SimResult result;

  const json created = at_stage("create", [&] {
    return api.post("/workshops", {{"title", "Simulated workshop " + std::to_string(sc.seed)},
                                   {"agenda", agenda_to_json(agenda)},
                                   {"issue_areas", area_labels()}});
  });
  const std::string id = created.at("id").get<std::string>();
  const std::string base = "/workshops/" + id;
  result.workshop_id = id;

  static const std::array<const char*, 3> kGroups = {"Public associations", "Scholars and academicians", "NGOs"};
  std::string fac;
  std::vector<Agent> agents;
  at_stage("register", [&] {
    fac = api.post(base + "/participants", {{"role", "Facilitator"}}).at("token").get<std::string>();
    for (std::size_t i = 0; i < policies.size(); ++i) {
      json r = api.post(base + "/participants", {{"role", "Stakeholder"}, {"group_label", kGroups[i % kGroups.size()]}});
      Agent a;
      a.policy = policies[i];
      a.alias = r.at("alias").get<std::string>();
      a.token = r.at("token").get<std::string>();
      agents.push_back(std::move(a));
    }
    api.post(base + "/phase/advance", json::object(), fac);
  });

  auto open = [&](const char* kind) { return api.post(base + "/steps/open", {{"kind", kind}}, fac); };
  auto close = [&] { return api.post(base + "/steps/close", json::object(), fac); };

  at_stage("IdeaEntry", [&] {
    open("IdeaEntry");
    for (std::size_t i = 0; i < agents.size(); ++i) {
      const int count = sc.ideas.empty() ? sc.ideas_each : sc.ideas[i];
      auto texts = generate_ideas(sc.seed, static_cast<int>(i), count);
      json ideas = json::array();
      for (int k = 0; k < count; ++k) {
        ideas.push_back({{"text", texts[static_cast<std::size_t>(k)]},
                         {"area", kTopics[idea_topic(sc.seed, static_cast<int>(i), k)].area}});
      }
      json r = api.post(base + "/ideas", {{"ideas", ideas}}, agents[i].token);
      for (const auto& sid : r.at("accepted")) agents[i].own_statements.insert(sid.get<std::string>());
      result.raw_ideas += r.at("accepted").size();
    }
    close();
  });

  at_stage("Merge", [&] {
    open("Merge");
    if (sc.merge_target) {
      std::map<std::string, std::string> ga;
      if (sc.ga_areas) {
        ga = api.get(base + "/area-assignment", fac, {{"seed", std::to_string(sc.seed)}})
                 .at("areas")
                 .get<std::map<std::string, std::string>>();
      }
      json groups = api.get(base + "/merge-suggestions", fac, {{"target", std::to_string(*sc.merge_target)}})
                        .at("groups");
      json plan = json::array();
      for (const auto& g : groups) {
        auto members = g.at("members").get<std::vector<std::string>>();
        if (members.size() < 2) continue;
        std::map<std::string, int> votes;
        for (const auto& m : members) {
          auto it = ga.find(m);
          ++votes[it == ga.end() ? std::string(kOthersArea) : it->second];
        }
        std::string area = std::max_element(votes.begin(), votes.end(), [](const auto& a, const auto& b) {
                             return a.second < b.second;
                           })->first;
        std::string heading = g.at("heading").get<std::string>();
        if (heading.empty()) heading = "Issue group " + std::to_string(plan.size() + 1);
        plan.push_back({{"members", members}, {"heading", heading}, {"area", area}});
      }
      json r = api.post(base + "/merge-plan", {{"groups", plan}}, fac);
      if (!r.at("reduction_rate").is_null()) result.reduction_rate = r.at("reduction_rate").get<double>();
    }
    close();
    json summary = api.get(base, fac);
    result.merged_list = summary.at("active_items").get<std::size_t>();
    if (!result.reduction_rate && !summary.at("reduction_rate").is_null()) {
      result.reduction_rate = summary.at("reduction_rate").get<double>();
    }
  });

  // Item texts and authorship, for opinions and self-bias.
  std::map<std::string, std::string> item_text;
  std::map<std::string, std::vector<std::string>> item_sources;
  at_stage("items", [&] {
    const json listing = api.get(base + "/items", fac, {{"all", "true"}});
    for (const auto& it : listing.at("items")) {
      const std::string sid = it.at("id").get<std::string>();
      item_text[sid] = it.at("text").get<std::string>();
      item_sources[sid] = it.at("merged_from").get<std::vector<std::string>>();
    }
  });
  const std::uint64_t salience_seed = mix_seed(sc.seed, 0x5a1e);
  auto salience = [&](const std::string& item) {
    const double u = unit_of(mix_seed(salience_seed, fnv1a(item_text[item])));
    return std::pow(u, sc.salience_exponent) * agenda.rating_scale_max;
  };
  std::vector<std::map<std::string, double>> opinions(agents.size());
  std::vector<std::set<std::string>> own_items(agents.size());
  for (std::size_t a = 0; a < agents.size(); ++a) {
    for (const auto& [item, text] : item_text) {
      Rng noise(mix_seed(agents[a].policy.seed, fnv1a(item)));
      opinions[a][item] = salience(item) + (2.0 * noise.unit() - 1.0) * sc.opinion_noise;
      bool own = agents[a].own_statements.count(item) != 0;
      for (const auto& src : item_sources[item]) own = own || agents[a].own_statements.count(src) != 0;
      if (own) own_items[a].insert(item);
    }
  }

  std::map<std::string, double> last_mean;
  std::map<std::string, double> last_borda;
  GateDecision decision = GateDecision::Iterate;
  for (int round = 1; decision == GateDecision::Iterate; ++round) {
    RoundMetrics m;
    m.round = round;
    const std::string tag = "round " + std::to_string(round);
    std::vector<std::string> items;
    at_stage(tag + " Rating", [&] {
      open("Rating");
      items = api.get(base + "/rounds/" + std::to_string(round), fac).at("item_ids").get<std::vector<std::string>>();
      m.items = items.size();
      for (std::size_t a = 0; a < agents.size(); ++a) {
        StepContext ctx;
        ctx.kind = StepKind::Rating;
        ctx.round = round;
        ctx.scale_max = agenda.rating_scale_max;
        ctx.top_k = agenda.top_k;
        ctx.items = items;
        ctx.opinion = opinions[a];
        ctx.group_mean = last_mean;
        ctx.group_borda = last_borda;
        ctx.own_ratings = agents[a].last_ratings;
        ctx.own_items = own_items[a];
        Submission s = agent_act(agents[a].policy, ctx);
        json body = {{"ratings", s.ratings}};
        if (s.criterion && !sc.criteria.empty()) body["criterion"] = *s.criterion;
        api.post(base + "/ratings", body, agents[a].token);
        agents[a].last_ratings = s.ratings;
      }
      close();
    });
    at_stage(tag + " Ranking", [&] {
      open("Ranking");
      for (std::size_t a = 0; a < agents.size(); ++a) {
        StepContext ctx;
        ctx.kind = StepKind::Ranking;
        ctx.round = round;
        ctx.scale_max = agenda.rating_scale_max;
        ctx.top_k = agenda.top_k;
        ctx.items = items;
        ctx.opinion = opinions[a];
        ctx.group_mean = last_mean;
        ctx.group_borda = last_borda;
        ctx.own_ratings = agents[a].last_ratings;
        ctx.own_items = own_items[a];
        api.post(base + "/ranking", {{"items", agent_act(agents[a].policy, ctx).ranking}}, agents[a].token);
      }
      m.zero_support = close().at("eliminated").size();
    });
    at_stage(tag + " CutOff", [&] {
      open("CutOff");
      m.cutoff = close().at("eliminated").size();
    });
    at_stage(tag + " Chat", [&] {
      open("Chat");
      close();
    });
    at_stage(tag + " DelphiGate", [&] {
      open("DelphiGate");
      json g = api.post(base + "/gate", json::object(), fac);
      decision = parse_gate_decision(g.at("decision").get<std::string>());
      m.decision = decision;
      m.kendall_w = g.at("report").at("kendall_w").get<double>();
      m.eliminated_fraction = g.at("report").at("eliminated_fraction").get<double>();
      m.active_after = g.at("active").size();
      json r = api.get(base + "/rounds/" + std::to_string(round), fac);
      last_mean = r.at("mean_rating").get<std::map<std::string, double>>();
      last_borda = r.at("borda").get<std::map<std::string, double>>();
    });
    result.rounds.push_back(m);
  }

  result.outcome = decision;
  at_stage("trace", [&] {
    json summary = api.get(base, fac);
    result.final_list = summary.at("active_items").get<std::size_t>();
    result.state_hash = summary.at("state_hash").get<std::string>();
    std::istringstream lines(api.get_text(base + "/events", fac));
    for (std::string line; std::getline(lines, line);) {
      if (!line.empty()) result.trace.push_back(event_from_json(json::parse(line)));
    }
  });
  return result;
}

double condorcet_majority_probability(int m, double p) {
  if (m < 1) fail(ErrorCode::InvalidArgument, "voter count must be positive");
  if (m % 2 == 0) fail(ErrorCode::EvenVoters, "voter count must be odd");
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorCode::InvalidArgument, "p must lie in [0, 1]");
  double total = 0.0;
  double binom = 1.0;  // C(m, k), built up incrementally
  for (int k = 0; k <= m; ++k) {
    if (k > 0) binom = binom * static_cast<double>(m - k + 1) / static_cast<double>(k);
    if (2 * k > m) total += binom * std::pow(p, k) * std::pow(1.0 - p, m - k);
  }
  return total;
}

}  // namespace fw::sim
