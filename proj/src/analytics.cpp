#include "fw/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "fw/error.hpp"

namespace fw::analytics {
namespace {

void require_alias(const WorkshopState& state, const std::string& alias) {
  if (state.participant_by_alias(alias) == nullptr) fail(ErrorCode::UnknownAlias, "unknown alias " + alias);
}

}  // namespace

std::vector<BehaviorSnapshot> behavior_series(const WorkshopState& state, const std::string& alias) {
  require_alias(state, alias);
  std::vector<BehaviorSnapshot> out;
  for (const auto& s : state.snapshots) {
    if (s.alias == alias) out.push_back(s);
  }
  std::stable_sort(out.begin(), out.end(), [](const BehaviorSnapshot& a, const BehaviorSnapshot& b) {
    if (a.round != b.round) return a.round < b.round;
    return static_cast<int>(a.step_kind) < static_cast<int>(b.step_kind);
  });
  return out;
}

double stability(const WorkshopState& state, const std::string& alias,
                 const std::vector<std::string>& items) {
  std::vector<BehaviorSnapshot> ratings;
  for (auto& s : behavior_series(state, alias)) {
    if (s.step_kind == StepKind::Rating) ratings.push_back(std::move(s));
  }
  if (ratings.size() < 2) {
    fail(ErrorCode::InsufficientHistory, alias + " has fewer than 2 rating snapshots");
  }
  auto wanted = [&](const std::string& item) {
    return items.empty() || std::find(items.begin(), items.end(), item) != items.end();
  };
  double total = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 1; i < ratings.size(); ++i) {
    double change = 0.0;
    std::size_t common = 0;
    for (const auto& [item, v] : ratings[i - 1].vector) {
      auto it = ratings[i].vector.find(item);
      if (it == ratings[i].vector.end() || !wanted(item)) continue;
      change += std::abs(it->second - v);
      ++common;
    }
    if (common == 0) continue;
    total += change / static_cast<double>(common);
    ++pairs;
  }
  if (pairs == 0) fail(ErrorCode::InsufficientHistory, alias + " has no comparable rating pairs");
  return total / static_cast<double>(pairs);
}

CriteriaDistribution criteria_distribution(const WorkshopState& state, int round) {
  const auto& criteria = state.agenda.criteria;
  if (criteria.empty()) fail(ErrorCode::TaggingDisabled, "criterion tagging is not enabled");
  const EvaluationRound* r = nullptr;
  for (const auto& x : state.rounds) {
    if (x.index == round) r = &x;
  }
  if (r == nullptr) fail(ErrorCode::NotFound, "no round " + std::to_string(round));

  CriteriaDistribution d;
  d.round = round;
  std::map<std::string, std::size_t> counts;
  for (const auto& [alias, ratings] : r->ratings) {
    auto it = r->criterion_tags.find(alias);
    if (it == r->criterion_tags.end()) {
      ++d.untagged;
    } else {
      ++counts[it->second];
      ++d.tagged;
    }
  }
  std::size_t best = 0;
  for (const auto& c : criteria) {
    auto it = counts.find(c);
    if (it == counts.end()) continue;
    d.fractions[c] = static_cast<double>(it->second) / static_cast<double>(d.tagged);
    if (it->second > best) {
      best = it->second;
      d.dominant = c;
    }
  }
  return d;
}

std::vector<CriteriaDistribution> criteria_shift(const WorkshopState& state) {
  std::vector<CriteriaDistribution> out;
  if (state.agenda.criteria.empty()) fail(ErrorCode::TaggingDisabled, "criterion tagging is not enabled");
  for (const auto& r : state.rounds) out.push_back(criteria_distribution(state, r.index));
  return out;
}

KnowledgeSummary knowledge_gain_summary(const WorkshopState& state) {
  KnowledgeSummary out;
  for (const auto& step : state.steps) {
    if (step.kind != StepKind::SelfAssessment) continue;
    StepKnowledge k;
    k.step_id = step.id;
    double total = 0.0;
    for (const auto& a : state.self_assessments) {
      if (a.step_id != step.id) continue;
      total += a.knowledge_gain;
      ++k.count;
      out.per_alias[a.alias].emplace_back(step.id, a.knowledge_gain);
    }
    if (k.count > 0) k.mean = total / static_cast<double>(k.count);
    out.per_step.push_back(std::move(k));
  }
  return out;
}

}  // namespace fw::analytics
