#include "fw/grouping.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>

#include "fw/error.hpp"
#include "fw/rng.hpp"

namespace fw::grouping {
namespace {

bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  // Keeps the smaller index as root so cluster order follows first members.
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

std::vector<std::vector<std::size_t>> components(std::size_t n, DisjointSets& sets) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<std::size_t> slot(n, SIZE_MAX);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t root = sets.find(i);
    if (slot[root] == SIZE_MAX) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(i);
  }
  return out;
}

std::string heading_for(const std::vector<std::size_t>& members, const std::vector<TextItem>& items,
                        const std::vector<TokenSet>& sets, const SimilarityConfig& config) {
  std::vector<std::string> shared;
  for (const auto& token : tokenize(items[members.front()].text, config)) {
    bool everywhere = std::all_of(members.begin(), members.end(), [&](std::size_t m) {
      return std::binary_search(sets[m].begin(), sets[m].end(), token);
    });
    if (everywhere) shared.push_back(token);
  }
  if (shared.empty()) {
    std::size_t best = members.front();
    for (std::size_t m : members) {
      if (items[m].text.size() > items[best].text.size()) best = m;
    }
    return items[best].text;
  }
  std::string heading;
  for (const auto& t : shared) {
    if (!heading.empty()) heading += ' ';
    heading += t;
  }
  return heading;
}

std::vector<ClusterSuggestion> to_suggestions(const std::vector<std::vector<std::size_t>>& groups,
                                              const std::vector<TextItem>& items,
                                              const std::vector<TokenSet>& sets,
                                              const SimilarityConfig& config) {
  std::vector<ClusterSuggestion> out;
  out.reserve(groups.size());
  for (const auto& g : groups) {
    ClusterSuggestion s;
    for (std::size_t m : g) s.member_ids.push_back(items[m].id);
    s.heading = heading_for(g, items, sets, config);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text, const SimilarityConfig& config) {
  std::vector<std::string> tokens;
  std::set<std::string> seen;
  std::string current;
  auto flush = [&] {
    if (current.empty()) return;
    bool stop = std::find(config.stopwords.begin(), config.stopwords.end(), current) !=
                config.stopwords.end();
    if (!stop && seen.insert(current).second) tokens.push_back(current);
    current.clear();
  };
  for (char ch : text) {
    auto c = static_cast<unsigned char>(ch);
    if (is_word_byte(c)) {
      current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : ch);
    } else {
      flush();
    }
  }
  flush();
  return tokens;
}

TokenSet token_set(std::string_view text, const SimilarityConfig& config) {
  auto tokens = tokenize(text, config);
  std::sort(tokens.begin(), tokens.end());
  return tokens;
}

double jaccard(const TokenSet& a, const TokenSet& b) {
  if (a.empty() && b.empty()) return 0.0;
  std::size_t common = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  const std::size_t uni = a.size() + b.size() - common;
  return static_cast<double>(common) / static_cast<double>(uni);
}

double similarity(std::string_view a, std::string_view b, const SimilarityConfig& config) {
  return jaccard(token_set(a, config), token_set(b, config));
}

std::vector<ClusterSuggestion> suggest_clusters(const std::vector<TextItem>& items,
                                                const SimilarityConfig& config) {
  const std::size_t n = items.size();
  std::vector<TokenSet> sets;
  sets.reserve(n);
  for (const auto& it : items) sets.push_back(token_set(it.text, config));

  DisjointSets ds(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (jaccard(sets[i], sets[j]) >= config.threshold) ds.unite(i, j);
    }
  }
  return to_suggestions(components(n, ds), items, sets, config);
}

std::vector<ClusterSuggestion> clusters_for_target(const std::vector<TextItem>& items,
                                                   const SimilarityConfig& config,
                                                   std::size_t target) {
  const std::size_t n = items.size();
  if (target < 1 || target > n) {
    fail(ErrorCode::InvalidArgument, "cluster target must be within 1.." + std::to_string(n));
  }
  std::vector<TokenSet> sets;
  for (const auto& it : items) sets.push_back(token_set(it.text, config));

  struct Edge {
    double sim;
    std::size_t a, b;
  };
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) edges.push_back({jaccard(sets[i], sets[j]), i, j});
  }
  // Descending similarity, index order on ties: Kruskal-style single linkage.
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.sim > y.sim; });

  // Add whole similarity levels while the cluster count stays >= target;
  // then merge single edges from the next level to land exactly on target.
  DisjointSets ds(n);
  std::size_t count = n;
  std::size_t e = 0;
  while (e < edges.size() && count > target) {
    std::size_t level_end = e;
    while (level_end < edges.size() && edges[level_end].sim == edges[e].sim) ++level_end;

    DisjointSets trial = ds;
    std::size_t trial_count = count;
    for (std::size_t k = e; k < level_end; ++k) {
      if (trial.find(edges[k].a) != trial.find(edges[k].b)) {
        trial.unite(edges[k].a, edges[k].b);
        --trial_count;
      }
    }
    if (trial_count >= target) {
      ds = trial;
      count = trial_count;
      e = level_end;
      continue;
    }
    for (std::size_t k = e; k < level_end && count > target; ++k) {
      if (ds.find(edges[k].a) != ds.find(edges[k].b)) {
        ds.unite(edges[k].a, edges[k].b);
        --count;
      }
    }
    break;
  }
  return to_suggestions(components(n, ds), items, sets, config);
}

std::vector<std::vector<double>> area_scores(const std::vector<TextItem>& statements,
                                             const std::vector<AreaProfile>& areas,
                                             const SimilarityConfig& config) {
  std::vector<TokenSet> profiles;
  for (const auto& area : areas) {
    if (area.keywords.empty()) {
      profiles.push_back(token_set(area.label, config));
    } else {
      TokenSet set;
      for (const auto& kw : area.keywords) {
        for (auto& t : tokenize(kw, config)) set.push_back(std::move(t));
      }
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      profiles.push_back(std::move(set));
    }
  }
  std::vector<std::vector<double>> scores(statements.size(), std::vector<double>(areas.size()));
  for (std::size_t i = 0; i < statements.size(); ++i) {
    TokenSet s = token_set(statements[i].text, config);
    for (std::size_t a = 0; a < areas.size(); ++a) {
      scores[i][a] = areas[a].label == kOthersArea ? kOthersFloor : jaccard(s, profiles[a]);
    }
  }
  return scores;
}

double fitness(const std::map<std::string, std::string>& assignment,
               const std::vector<TextItem>& statements, const std::vector<AreaProfile>& areas,
               const SimilarityConfig& config) {
  auto scores = area_scores(statements, areas, config);
  double total = 0.0;
  for (std::size_t i = 0; i < statements.size(); ++i) {
    auto it = assignment.find(statements[i].id);
    if (it == assignment.end()) {
      fail(ErrorCode::UnassignedStatement, "statement " + statements[i].id + " has no area");
    }
    auto a = std::find_if(areas.begin(), areas.end(),
                          [&](const AreaProfile& p) { return p.label == it->second; });
    if (a == areas.end()) fail(ErrorCode::UnknownArea, "unknown area " + it->second);
    total += scores[i][static_cast<std::size_t>(a - areas.begin())];
  }
  return total;
}

AreaAssignment ga_assign_areas(const std::vector<TextItem>& statements,
                               const std::vector<AreaProfile>& areas, const GaParams& params,
                               const SimilarityConfig& config) {
  if (areas.size() < 2) fail(ErrorCode::NoAreas, "area assignment needs at least 2 areas");
  if (statements.empty()) fail(ErrorCode::EmptyInput, "no statements to assign");
  if (params.population < 2 || params.generations < 1 || params.crossover_rate < 0.0 ||
      params.crossover_rate > 1.0 || params.mutation_rate < 0.0 || params.mutation_rate > 1.0) {
    fail(ErrorCode::InvalidArgument, "GA parameters out of range");
  }

  const auto scores = area_scores(statements, areas, config);
  const std::size_t genes = statements.size();
  const std::size_t n_areas = areas.size();
  const auto pop_size = static_cast<std::size_t>(params.population);
  using Chromosome = std::vector<std::size_t>;

  auto evaluate = [&](const Chromosome& c) {
    double f = 0.0;
    for (std::size_t i = 0; i < genes; ++i) f += scores[i][c[i]];
    return f;
  };

  Rng rng(params.seed);
  std::vector<Chromosome> pop(pop_size, Chromosome(genes));
  std::vector<double> fit(pop_size);
  for (std::size_t p = 0; p < pop_size; ++p) {
    for (auto& g : pop[p]) g = static_cast<std::size_t>(rng.below(n_areas));
    fit[p] = evaluate(pop[p]);
  }
  auto best_index = [&] {
    return static_cast<std::size_t>(std::max_element(fit.begin(), fit.end()) - fit.begin());
  };
  auto tournament = [&]() -> std::size_t {
    std::size_t a = static_cast<std::size_t>(rng.below(pop_size));
    std::size_t b = static_cast<std::size_t>(rng.below(pop_size));
    return fit[b] > fit[a] ? b : a;
  };

  AreaAssignment result;
  result.best_per_generation.push_back(fit[best_index()]);

  std::vector<Chromosome> next(pop_size);
  std::vector<double> next_fit(pop_size);
  for (int gen = 0; gen < params.generations; ++gen) {
    const std::size_t elite = best_index();
    next[0] = pop[elite];
    next_fit[0] = fit[elite];
    for (std::size_t p = 1; p < pop_size; ++p) {
      const Chromosome& a = pop[tournament()];
      const Chromosome& b = pop[tournament()];
      Chromosome child = a;
      if (rng.chance(params.crossover_rate)) {
        for (std::size_t i = 0; i < genes; ++i) {
          if (rng.chance(0.5)) child[i] = b[i];
        }
      }
      for (auto& g : child) {
        if (rng.chance(params.mutation_rate)) g = static_cast<std::size_t>(rng.below(n_areas));
      }
      next_fit[p] = evaluate(child);
      next[p] = std::move(child);
    }
    pop.swap(next);
    fit.swap(next_fit);
    result.best_per_generation.push_back(fit[best_index()]);
  }

  const std::size_t best = best_index();
  result.genes = pop[best];
  result.fitness = fit[best];
  for (std::size_t i = 0; i < genes; ++i) {
    result.areas[statements[i].id] = areas[result.genes[i]].label;
  }
  return result;
}

}  // namespace fw::grouping
