#include <algorithm>
#include <cmath>
#include <numeric>

#include "support.hpp"

#include "fw/aggregation.hpp"
#include "fw/kernels.hpp"
#include "fw/rng.hpp"

using namespace fw;
using namespace fw::aggregation;

namespace {

// Textbook W straight from the rank matrix, no shared code with the library.
double w_oracle(const std::vector<std::vector<double>>& rows) {
  const double m = static_cast<double>(rows.size());
  const std::size_t n = rows[0].size();
  std::vector<double> r(n, 0.0);
  for (const auto& row : rows)
    for (std::size_t j = 0; j < n; ++j) r[j] += row[j];
  const double mean = m * (static_cast<double>(n) + 1) / 2;
  double s = 0;
  for (double x : r) s += (x - mean) * (x - mean);
  const double nn = static_cast<double>(n);
  return 12 * s / (m * m * (nn * nn * nn - nn));
}

}  // namespace

TEST_CASE("mean rating") {
  std::vector<int> a{3, 3, 3}, b{4, 5, 3, 3}, c{0, 5};
  CHECK(mean_rating(a, 5) == 3.0);
  CHECK(mean_rating(b, 5) == 3.75);
  CHECK(mean_rating(c, 5) == 2.5);
  std::vector<int> empty, high{6}, neg{-1};
  CHECK_CODE(mean_rating(empty, 5), ErrorCode::EmptyInput);
  CHECK_CODE(mean_rating(high, 5), ErrorCode::OutOfScale);
  CHECK_CODE(mean_rating(neg, 5), ErrorCode::OutOfScale);
}

TEST_CASE("borda scores") {
  const std::vector<std::string> items{"A", "B", "C", "D"};
  auto one = borda_scores({{"P1", {"A", "B", "C"}}}, 10, items);
  CHECK(one["A"] == 10);
  CHECK(one["B"] == 9);
  CHECK(one["C"] == 8);
  CHECK(one["D"] == 0);

  auto two = borda_scores({{"P1", {"A", "B"}}, {"P2", {"B", "A"}}}, 10, items);
  CHECK(two["A"] == 19);
  CHECK(two["B"] == 19);

  auto none = borda_scores({}, 10, items);
  CHECK(none.size() == 4);
  for (const auto& [k, v] : none) CHECK(v == 0);

  CHECK_CODE(borda_scores({{"P1", {"A", "A"}}}, 10, items), ErrorCode::MalformedBallot);
  CHECK_CODE(borda_scores({{"P1", {"Z"}}}, 10, items), ErrorCode::MalformedBallot);
  CHECK_CODE(borda_scores({{"P1", {"A", "B", "C"}}}, 2, items), ErrorCode::MalformedBallot);
}

TEST_CASE("kendall W hand-computed cases") {
  CHECK(kendall_w({{1, 2, 3}, {1, 2, 3}}) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(kendall_w({{1, 2, 3}, {3, 2, 1}})) < 1e-12);
  CHECK(std::abs(kendall_w({{1, 2, 3}, {1, 3, 2}}) - 0.75) < 1e-12);
  CHECK_CODE(kendall_w({{1, 2, 3}}), ErrorCode::TooFewRankers);
  CHECK_CODE(kendall_w({{1}, {1}}), ErrorCode::TooFewItems);
  CHECK_CODE(kendall_w({{1, 2, 3}, {1, 2}}), ErrorCode::MalformedBallot);
  CHECK_CODE(kendall_w({{1, 2, 2}, {1, 2, 3}}), ErrorCode::MalformedBallot);
}

TEST_CASE("kendall W agrees with the textbook formula on random permutations") {
  Rng rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t m = 2 + rng.below(9), n = 2 + rng.below(15);
    std::vector<std::vector<double>> rows(m, std::vector<double>(n));
    for (auto& row : rows) {
      std::iota(row.begin(), row.end(), 1.0);
      rng.shuffle(row);
    }
    CHECK(std::abs(kendall_w(rows) - w_oracle(rows)) < 1e-12);
  }
}

TEST_CASE("partial ballots take the mid rank of the remainder") {
  auto r = complete_ranking({"B"}, {"A", "B", "C", "D"});
  CHECK(r == std::vector<double>{3.0, 1.0, 3.0, 3.0});
  // identical partial ballots still agree perfectly on the ranked head
  Ballots b{{"P1", {"A", "B"}}, {"P2", {"A", "B"}}};
  CHECK(kendall_w(b, {"A", "B", "C"}) == doctest::Approx(1.0));
}

TEST_CASE("cut-off keeps boundary ties") {
  auto t = cutoff_top({{"A", 9.1}, {"B", 8.0}, {"C", 8.0}, {"D", 7.5}}, 2);
  CHECK(t.selected == std::vector<std::string>{"A", "B", "C"});
  CHECK(t.eliminated == std::vector<std::string>{"D"});

  Scores s;
  for (int i = 0; i < 35; ++i) s["S" + std::to_string(i)] = i;
  auto c = cutoff_top(s, 17);
  CHECK(c.selected.size() == 17);
  CHECK(c.eliminated.size() == 18);

  auto all = cutoff_top({{"A", 1}, {"B", 2}}, 5);
  CHECK(all.selected == std::vector<std::string>{"B", "A"});
  CHECK(all.eliminated.empty());
}

TEST_CASE("reduction rate") {
  CHECK(reduction_rate(40, 40) == 0.0);
  CHECK(reduction_rate(63, 40) == doctest::Approx(23.0 / 63.0));
  CHECK(reduction_rate(40, 17) == doctest::Approx(0.575));
  CHECK_CODE(reduction_rate(3, 4), ErrorCode::AfterExceedsBefore);
  CHECK_CODE(reduction_rate(0, 0), ErrorCode::InvalidArgument);
}

TEST_CASE("gate decision table") {
  ConvergencePolicy p;
  CHECK(decide(p, 1, 0.65, 0) == GateDecision::Converged);
  CHECK(decide(p, 2, 0.2, 0) == GateDecision::BudgetStop);
  CHECK(decide(p, 1, 0.2, 0) == GateDecision::Iterate);
  CHECK(decide(p, 1, 1.0, 0) == GateDecision::Converged);

  // raising W never leaves Converged
  for (int round = 1; round <= 4; ++round) {
    bool converged = false;
    for (int i = 0; i <= 100; ++i) {
      const auto d = decide(p, round, i / 100.0, 0);
      if (converged) CHECK(d == GateDecision::Converged);
      converged = converged || d == GateDecision::Converged;
    }
  }
}

TEST_CASE("low discrimination flag") {
  std::vector<double> flat{3.0, 3.5, 4.0, 4.2}, spread{0.5, 2.0, 3.5, 5.0};
  CHECK(low_discrimination(flat));
  CHECK_FALSE(low_discrimination(spread));
}

TEST_CASE("scalar and dispatched kernels are bit-identical") {
  Rng rng(99);
  for (std::size_t len : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 17u, 63u, 64u, 1001u}) {
    std::vector<double> v(len);
    for (auto& x : v) x = (rng.unit() - 0.5) * 1e3;
    const double scalar_sum = kernels::scalar::sum(v);
    const double scalar_ssd = kernels::scalar::sum_squared_deviation(v, 1.25);
    CHECK(scalar_sum == kernels::sum(v));
    CHECK(scalar_ssd == kernels::sum_squared_deviation(v, 1.25));
#if defined(FW_HAVE_AVX2)
    if (kernels::detected_isa() == kernels::Isa::Avx2) {
      CHECK(scalar_sum == kernels::avx2::sum(v));
      CHECK(scalar_ssd == kernels::avx2::sum_squared_deviation(v, 1.25));
    }
#endif
    for (std::size_t cols : {1u, 3u, 4u, 9u}) {
      if (len % cols != 0) continue;
      std::vector<double> a(cols), b(cols);
      kernels::scalar::column_sums(v, cols, a);
      kernels::column_sums(v, cols, b);
      CHECK(a == b);
#if defined(FW_HAVE_AVX2)
      if (kernels::detected_isa() == kernels::Isa::Avx2) {
        std::vector<double> c(cols);
        kernels::avx2::column_sums(v, cols, c);
        CHECK(a == c);
      }
#endif
    }
  }
}

TEST_CASE("forcing scalar does not change W") {
  std::vector<std::vector<double>> rows{{1, 2, 3, 4, 5}, {2, 1, 3, 5, 4}, {5, 4, 3, 2, 1}};
  const double w = kendall_w(rows);
  kernels::override_isa(kernels::Isa::Scalar);
  CHECK(kendall_w(rows) == w);
  kernels::override_isa(std::nullopt);
}
