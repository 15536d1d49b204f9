#include <set>

#include "support.hpp"

#include "fw/grouping.hpp"
#include "fw/rng.hpp"

using namespace fw;
using namespace fw::grouping;

namespace {

std::vector<std::vector<std::string>> member_sets(const std::vector<ClusterSuggestion>& cs) {
  std::vector<std::vector<std::string>> out;
  for (const auto& c : cs) out.push_back(c.member_ids);
  return out;
}

// Best assignment by enumerating every area vector.
double brute_force(const std::vector<std::vector<double>>& scores, std::size_t areas) {
  const std::size_t n = scores.size();
  std::vector<std::size_t> genes(n, 0);
  double best = -1;
  while (true) {
    double f = 0;
    for (std::size_t i = 0; i < n; ++i) f += scores[i][genes[i]];
    best = std::max(best, f);
    std::size_t k = 0;
    while (k < n && ++genes[k] == areas) genes[k++] = 0;
    if (k == n) break;
  }
  return best;
}

}  // namespace

TEST_CASE("tokenize lowercases, splits and drops stopwords") {
  SimilarityConfig cfg;
  cfg.stopwords = {"the"};
  CHECK(tokenize("The Water-Scarcity, the water!", cfg) ==
        std::vector<std::string>{"water", "scarcity"});
  CHECK(token_set("b a b", cfg) == TokenSet{"a", "b"});
}

TEST_CASE("similarity") {
  SimilarityConfig cfg;
  CHECK(similarity("water scarcity", "water scarcity", cfg) == 1.0);
  CHECK(similarity("water scarcity", "urban traffic", cfg) == 0.0);
  CHECK(similarity("water scarcity", "water pollution", cfg) == doctest::Approx(1.0 / 3.0));
  CHECK(similarity("", "", cfg) == 0.0);
}

TEST_CASE("suggested clusters") {
  SimilarityConfig cfg;
  std::vector<TextItem> same{{"S1", "clean river"}, {"S2", "clean river"}, {"S3", "clean river"}};
  CHECK(member_sets(suggest_clusters(same, cfg)) ==
        std::vector<std::vector<std::string>>{{"S1", "S2", "S3"}});

  std::vector<TextItem> distinct{{"S1", "a b"}, {"S2", "b c"}, {"S3", "c d"}};
  cfg.threshold = 1.0;
  CHECK(suggest_clusters(distinct, cfg).size() == 3);

  // pairwise 1/3 along the chain, 0 between the ends
  cfg.threshold = 0.3;
  CHECK(member_sets(suggest_clusters(distinct, cfg)) ==
        std::vector<std::vector<std::string>>{{"S1", "S2", "S3"}});
}

TEST_CASE("clusters for a target count") {
  SimilarityConfig cfg;
  std::vector<TextItem> items;
  for (int i = 0; i < 12; ++i) {
    items.push_back({"S" + std::to_string(i + 1), "topic" + std::to_string(i % 5) + " extra" + std::to_string(i)});
  }
  for (std::size_t target = 1; target <= items.size(); ++target) {
    auto cs = clusters_for_target(items, cfg, target);
    CHECK(cs.size() == target);
    std::set<std::string> seen;
    for (const auto& c : cs)
      for (const auto& m : c.member_ids) CHECK(seen.insert(m).second);
    CHECK(seen.size() == items.size());
  }
}

TEST_CASE("area fitness") {
  SimilarityConfig cfg;
  std::vector<AreaProfile> areas{{"Water", {"water", "river"}}, {"Transport", {"bus", "tram"}},
                                 {"Others", {}}};
  std::vector<TextItem> st{{"S1", "water river"}, {"S2", "bus tram"}, {"S3", "music festival"}};
  CHECK(fitness({}, {}, areas, cfg) == 0.0);
  CHECK(fitness({{"S1", "Others"}, {"S2", "Others"}, {"S3", "Others"}}, st, areas, cfg) ==
        doctest::Approx(3 * kOthersFloor));
  CHECK(fitness({{"S1", "Water"}, {"S2", "Transport"}, {"S3", "Others"}}, st, areas, cfg) ==
        doctest::Approx(2 + kOthersFloor));
  CHECK_CODE(fitness({{"S1", "Water"}}, st, areas, cfg), ErrorCode::UnassignedStatement);
  CHECK_CODE(fitness({{"S1", "Nope"}, {"S2", "Water"}, {"S3", "Water"}}, st, areas, cfg),
             ErrorCode::UnknownArea);
}

TEST_CASE("GA on a separable instance finds the exact assignment") {
  SimilarityConfig cfg;
  std::vector<AreaProfile> areas{{"A", {"alpha", "beta"}}, {"B", {"gamma", "delta"}},
                                 {"C", {"eps", "zeta"}}};
  std::vector<TextItem> st{{"S1", "alpha beta"}, {"S2", "gamma delta"}, {"S3", "eps zeta"},
                           {"S4", "beta alpha"}, {"S5", "delta gamma"}};
  auto r = ga_assign_areas(st, areas, {}, cfg);
  CHECK(r.fitness == doctest::Approx(5.0));
  CHECK(r.areas == std::map<std::string, std::string>{
                       {"S1", "A"}, {"S2", "B"}, {"S3", "C"}, {"S4", "A"}, {"S5", "B"}});
  // best-so-far never decreases under elitism
  for (std::size_t g = 1; g < r.best_per_generation.size(); ++g)
    CHECK(r.best_per_generation[g] >= r.best_per_generation[g - 1]);
}

TEST_CASE("disjoint statements land in Others") {
  SimilarityConfig cfg;
  std::vector<AreaProfile> areas{{"A", {"alpha"}}, {"B", {"beta"}}, {"Others", {}}};
  auto r = ga_assign_areas({{"S1", "omega"}}, areas, {}, cfg);
  CHECK(r.areas.at("S1") == "Others");
}

TEST_CASE("GA is deterministic and matches enumeration on an 8x3 instance") {
  SimilarityConfig cfg;
  Rng rng(2024);
  const std::vector<std::string> vocab{"w0", "w1", "w2", "w3", "w4", "w5", "w6", "w7", "w8"};
  auto pick = [&](int k) {
    std::string s;
    for (int i = 0; i < k; ++i) s += vocab[rng.below(vocab.size())] + " ";
    return s;
  };
  std::vector<AreaProfile> areas;
  for (int a = 0; a < 3; ++a) {
    AreaProfile p{"Area" + std::to_string(a), {}};
    for (const auto& t : token_set(pick(4), cfg)) p.keywords.push_back(t);
    areas.push_back(p);
  }
  std::vector<TextItem> st;
  for (int i = 0; i < 8; ++i) st.push_back({"S" + std::to_string(i + 1), pick(3)});

  auto a = ga_assign_areas(st, areas, {}, cfg);
  auto b = ga_assign_areas(st, areas, {}, cfg);
  CHECK(a.genes == b.genes);
  CHECK(a.fitness == doctest::Approx(brute_force(area_scores(st, areas, cfg), 3)));
}

TEST_CASE("GA input errors") {
  SimilarityConfig cfg;
  CHECK_CODE(ga_assign_areas({{"S1", "x"}}, {{"A", {}}}, {}, cfg), ErrorCode::NoAreas);
  CHECK_CODE(ga_assign_areas({}, {{"A", {}}, {"B", {}}}, {}, cfg), ErrorCode::EmptyInput);
}
