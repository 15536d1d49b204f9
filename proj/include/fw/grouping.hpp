#pragma once

// Redundancy detection, merge suggestions and genetic assignment of
// statements to issue areas.

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "fw/model.hpp"

namespace fw::grouping {

using TokenSet = std::vector<std::string>;  // sorted, unique

// Lowercased words split on ASCII non-alphanumerics, stopwords removed, in
// order of first occurrence. Bytes >= 0x80 count as word characters.
std::vector<std::string> tokenize(std::string_view text, const SimilarityConfig& config);
TokenSet token_set(std::string_view text, const SimilarityConfig& config);

// Jaccard index; two empty sets give 0.
double jaccard(const TokenSet& a, const TokenSet& b);
double similarity(std::string_view a, std::string_view b, const SimilarityConfig& config);

struct TextItem {
  std::string id;
  std::string text;
};

struct ClusterSuggestion {
  std::vector<std::string> member_ids;  // input order
  std::string heading;
};

// Single-linkage clusters of the graph with an edge wherever similarity >=
// config.threshold. Clusters are ordered by their first member.
std::vector<ClusterSuggestion> suggest_clusters(const std::vector<TextItem>& items,
                                                const SimilarityConfig& config);

// Like suggest_clusters but lands on exactly `target` clusters (when
// 1 <= target <= items): picks the tightest threshold whose cluster count is
// still >= target, then merges the most similar cluster pairs until the count
// matches.
std::vector<ClusterSuggestion> clusters_for_target(const std::vector<TextItem>& items,
                                                   const SimilarityConfig& config,
                                                   std::size_t target);

struct GaParams {
  int population = 50;
  int generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = 0.05;
  std::uint64_t seed = 1;
};

inline constexpr double kOthersFloor = 0.05;

struct AreaAssignment {
  std::vector<std::size_t> genes;           // area index per statement
  std::map<std::string, std::string> areas;  // statement id -> area label
  double fitness = 0.0;
  std::vector<double> best_per_generation;  // index 0 = initial population
};

// Score of placing statement tokens in each area: Jaccard against the
// area's keyword profile, or the fixed floor for the "Others" area.
std::vector<std::vector<double>> area_scores(const std::vector<TextItem>& statements,
                                             const std::vector<AreaProfile>& areas,
                                             const SimilarityConfig& config);

// Sum over statements of their assigned area score. Throws UnassignedStatement
// when a statement id has no entry, UnknownArea for labels not in `areas`.
double fitness(const std::map<std::string, std::string>& assignment,
               const std::vector<TextItem>& statements, const std::vector<AreaProfile>& areas,
               const SimilarityConfig& config);

// Generational GA: tournament selection (size 2), uniform crossover, per-gene
// mutation, elitism 1. Deterministic for a fixed seed. Throws NoAreas when
// fewer than 2 areas are given, EmptyInput when there are no statements.
AreaAssignment ga_assign_areas(const std::vector<TextItem>& statements,
                               const std::vector<AreaProfile>& areas, const GaParams& params,
                               const SimilarityConfig& config);

}  // namespace fw::grouping
