#pragma once

// Rating/ranking aggregation, concordance and the convergence policy.
// Everything here is a pure function.

#include <map>
#include <span>
#include <string>
#include <vector>

#include "fw/model.hpp"

namespace fw::aggregation {

using Ballot = std::vector<std::string>;
using Ballots = std::map<std::string, Ballot>;  // alias -> ordered items
using Scores = std::map<std::string, double>;

// Arithmetic mean. Throws EmptyInput, or OutOfScale for values outside [0, scale_max].
double mean_rating(std::span<const int> values, int scale_max);

// Per ballot the item at 1-based position r earns top_k + 1 - r points.
// Every item in `items` appears in the result, unranked ones with 0.
// Throws MalformedBallot on over-long ballots, duplicates or unknown items.
Scores borda_scores(const Ballots& rankings, int top_k, const std::vector<std::string>& items);

// Completes a partial ballot into a rank vector aligned with `items`:
// ranked items get their position, the rest share the average of the
// remaining ranks.
std::vector<double> complete_ranking(const Ballot& ballot, const std::vector<std::string>& items);

// Kendall's coefficient of concordance W = 12 S / (m^2 (n^3 - n)) without a
// tie correction, clamped to [0, 1]. Each row holds one ranker's ranks for
// the same n items. Throws TooFewRankers (m < 2), TooFewItems (n < 2) or
// MalformedBallot (ragged rows or rank sum != n(n+1)/2).
double kendall_w(const std::vector<std::vector<double>>& rankings);

// W over partial ballots, each completed by mid-rank imputation.
double kendall_w(const Ballots& rankings, const std::vector<std::string>& items);

struct CutoffResult {
  std::vector<std::string> selected;    // score descending, then id
  std::vector<std::string> eliminated;  // score descending, then id
};

// Keeps the top n plus anything tied with the n-th score. n >= 1.
CutoffResult cutoff_top(const Scores& scores, int n);

// 1 - after / before. Throws AfterExceedsBefore, InvalidArgument for before < 1.
double reduction_rate(int before, int after);

// Converged if W >= w_min; else BudgetStop once round_index >= max_rounds;
// else Iterate. eliminated_fraction is carried in reports only.
GateDecision decide(const ConvergencePolicy& policy, int round_index, double kendall_w,
                    double eliminated_fraction);

// True when at least `fraction` of the means fit in a window `band` wide.
bool low_discrimination(std::span<const double> means, double band = 1.5, double fraction = 0.75);

}  // namespace fw::aggregation
