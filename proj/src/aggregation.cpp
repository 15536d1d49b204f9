#include "fw/aggregation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "fw/error.hpp"
#include "fw/kernels.hpp"

namespace fw::aggregation {

double mean_rating(std::span<const int> values, int scale_max) {
  if (values.empty()) fail(ErrorCode::EmptyInput, "mean of an empty rating set");
  std::int64_t total = 0;
  for (int v : values) {
    if (v < 0 || v > scale_max) {
      fail(ErrorCode::OutOfScale, "rating " + std::to_string(v) + " outside 0.." +
                                      std::to_string(scale_max));
    }
    total += v;
  }
  return static_cast<double>(total) / static_cast<double>(values.size());
}

Scores borda_scores(const Ballots& rankings, int top_k, const std::vector<std::string>& items) {
  Scores scores;
  for (const auto& item : items) scores.emplace_hint(scores.end(), item, 0.0);
  std::vector<Scores::iterator> slots;
  for (const auto& [alias, ballot] : rankings) {
    if (static_cast<int>(ballot.size()) > top_k) {
      fail(ErrorCode::MalformedBallot, "ballot of " + alias + " ranks more than " +
                                           std::to_string(top_k) + " items");
    }
    // Validate the whole ballot before crediting any of it.
    slots.clear();
    for (const auto& item : ballot) {
      auto it = scores.find(item);
      if (it == scores.end()) {
        fail(ErrorCode::MalformedBallot, "ballot of " + alias + " ranks unknown item " + item);
      }
      if (std::find(slots.begin(), slots.end(), it) != slots.end()) {
        fail(ErrorCode::MalformedBallot, "ballot of " + alias + " repeats item " + item);
      }
      slots.push_back(it);
    }
    for (std::size_t r = 0; r < slots.size(); ++r) {
      slots[r]->second += static_cast<double>(top_k - static_cast<int>(r));
    }
  }
  return scores;
}

std::vector<double> complete_ranking(const Ballot& ballot, const std::vector<std::string>& items) {
  const std::size_t n = items.size();
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < n; ++i) index.emplace(items[i], i);

  std::vector<double> ranks(n, -1.0);
  std::size_t placed = 0;
  for (const auto& item : ballot) {
    auto it = index.find(item);
    if (it == index.end()) fail(ErrorCode::MalformedBallot, "ballot ranks unknown item " + item);
    if (ranks[it->second] >= 0.0) fail(ErrorCode::MalformedBallot, "ballot repeats item " + item);
    ranks[it->second] = static_cast<double>(++placed);
  }
  // Remaining ranks placed+1 .. n share their average.
  const double mid = (static_cast<double>(placed + 1) + static_cast<double>(n)) / 2.0;
  for (auto& r : ranks) {
    if (r < 0.0) r = mid;
  }
  return ranks;
}

double kendall_w(const std::vector<std::vector<double>>& rankings) {
  const std::size_t m = rankings.size();
  if (m < 2) fail(ErrorCode::TooFewRankers, "concordance needs at least 2 rankers");
  const std::size_t n = rankings.front().size();
  if (n < 2) fail(ErrorCode::TooFewItems, "concordance needs at least 2 items");

  const double expected_row_sum = static_cast<double>(n) * static_cast<double>(n + 1) / 2.0;
  std::vector<double> matrix;
  matrix.reserve(m * n);
  for (const auto& row : rankings) {
    if (row.size() != n) fail(ErrorCode::MalformedBallot, "rankings have different lengths");
    double row_sum = 0.0;
    for (double r : row) {
      if (!(r >= 1.0 && r <= static_cast<double>(n))) {
        fail(ErrorCode::MalformedBallot, "rank outside 1..n");
      }
      row_sum += r;
    }
    if (std::abs(row_sum - expected_row_sum) > 1e-9 * expected_row_sum) {
      fail(ErrorCode::MalformedBallot, "ranking is not a (tied) permutation of 1..n");
    }
    matrix.insert(matrix.end(), row.begin(), row.end());
  }

  std::vector<double> rank_sums(n);
  kernels::column_sums(matrix, n, rank_sums);
  const double md = static_cast<double>(m);
  const double nd = static_cast<double>(n);
  const double s = kernels::sum_squared_deviation(rank_sums, md * (nd + 1.0) / 2.0);
  const double w = 12.0 * s / (md * md * (nd * nd * nd - nd));
  return std::clamp(w, 0.0, 1.0);
}

double kendall_w(const Ballots& rankings, const std::vector<std::string>& items) {
  std::vector<std::vector<double>> rows;
  rows.reserve(rankings.size());
  for (const auto& [alias, ballot] : rankings) rows.push_back(complete_ranking(ballot, items));
  return kendall_w(rows);
}

CutoffResult cutoff_top(const Scores& scores, int n) {
  if (n < 1) fail(ErrorCode::InvalidArgument, "cut-off size must be at least 1");
  std::vector<std::pair<std::string, double>> order(scores.begin(), scores.end());
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });

  CutoffResult result;
  if (order.empty()) return result;
  const std::size_t keep = std::min(order.size(), static_cast<std::size_t>(n));
  const double boundary = order[keep - 1].second;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i < keep || order[i].second == boundary) {
      result.selected.push_back(order[i].first);
    } else {
      result.eliminated.push_back(order[i].first);
    }
  }
  return result;
}

double reduction_rate(int before, int after) {
  if (before < 1) fail(ErrorCode::InvalidArgument, "reduction_rate needs before >= 1");
  if (after < 0) fail(ErrorCode::InvalidArgument, "reduction_rate needs after >= 0");
  if (after > before) {
    fail(ErrorCode::AfterExceedsBefore,
         std::to_string(after) + " items after exceeds " + std::to_string(before) + " before");
  }
  return 1.0 - static_cast<double>(after) / static_cast<double>(before);
}

GateDecision decide(const ConvergencePolicy& policy, int round_index, double kendall_w,
                    double /*eliminated_fraction*/) {
  if (kendall_w >= policy.w_min) return GateDecision::Converged;
  if (round_index >= policy.max_rounds) return GateDecision::BudgetStop;
  return GateDecision::Iterate;
}

bool low_discrimination(std::span<const double> means, double band, double fraction) {
  if (means.empty()) return false;
  std::vector<double> sorted(means.begin(), means.end());
  std::sort(sorted.begin(), sorted.end());
  const double need = fraction * static_cast<double>(sorted.size());
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < sorted.size(); ++hi) {
    while (sorted[hi] - sorted[lo] > band) ++lo;
    if (static_cast<double>(hi - lo + 1) >= need) return true;
  }
  return false;
}

}  // namespace fw::aggregation
