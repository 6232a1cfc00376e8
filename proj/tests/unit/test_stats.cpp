#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "greenmine/error.hpp"
#include "greenmine/stats.hpp"

using namespace greenmine;

namespace {

using V = std::vector<double>;

std::vector<DeltaRecord> records_with(const V& entropy, const V& delta) {
  std::vector<DeltaRecord> out;
  for (std::size_t i = 0; i < entropy.size(); ++i) {
    out.push_back({{"r" + std::to_string(i)}, entropy[i], delta[i]});
  }
  return out;
}

}  // namespace

TEST_CASE("pearson closed-form cases") {
  CHECK(std::abs(pearson(V{1, 2, 3}, V{2, 4, 6}) - 1.0) <= 1e-12);
  CHECK(std::abs(pearson(V{1, 2, 3}, V{6, 4, 2}) + 1.0) <= 1e-12);
  CHECK(std::abs(pearson(V{1, 2, 3, 4}, V{1, 3, 2, 4}) - 0.8) <= 1e-12);
}

TEST_CASE("pearson errors") {
  CHECK_THROWS_AS(pearson(V{1, 2}, V{1, 2, 3}), ValidationError);
  CHECK_THROWS_AS(pearson(V{1}, V{1}), ValidationError);
  CHECK_THROWS_AS(pearson(V{1, 1, 1}, V{1, 2, 3}), UndefinedStatisticError);
  CHECK_THROWS_AS(pearson(V{1, 2, 3}, V{4, 4, 4}), UndefinedStatisticError);
}

TEST_CASE("pearson properties") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> normal;
  V x(50), y(50);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = normal(rng);
    y[i] = 0.3 * x[i] + normal(rng);
  }
  const double r = pearson(x, y);
  CHECK(pearson(y, x) == doctest::Approx(r).epsilon(1e-14));
  V scaled(x.size()), flipped(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    scaled[i] = 3.5 * x[i] + 10.0;
    flipped[i] = -2.0 * x[i] + 1.0;
  }
  CHECK(std::abs(pearson(scaled, y) - r) <= 1e-12);
  CHECK(std::abs(pearson(x, scaled) - 1.0) <= 1e-12);
  CHECK(std::abs(pearson(x, flipped) + 1.0) <= 1e-12);
}

TEST_CASE("box summaries") {
  const BoxSummary five = box_summary(V{5, 3, 1, 4, 2});
  CHECK(five.min == 1);
  CHECK(five.q1 == 2);
  CHECK(five.median == 3);
  CHECK(five.q3 == 4);
  CHECK(five.max == 5);
  CHECK(five.count == 5);
  const BoxSummary one = box_summary(V{7});
  CHECK((one.min == 7 && one.q1 == 7 && one.median == 7 && one.q3 == 7 && one.max == 7));
  const BoxSummary four = box_summary(V{1, 2, 3, 4});
  CHECK(four.q1 == 1.75);
  CHECK(four.median == 2.5);
  CHECK(four.q3 == 3.25);
  CHECK_THROWS_AS(box_summary(V{}), ValidationError);
}

TEST_CASE("box summary ignores input order") {
  V values = {9, 1, 4, 4, 7, 2, 8, 3};
  const BoxSummary a = box_summary(values);
  std::mt19937 rng(5);
  std::shuffle(values.begin(), values.end(), rng);
  const BoxSummary b = box_summary(values);
  CHECK((a.q1 == b.q1 && a.median == b.median && a.q3 == b.q3));
}

TEST_CASE("grouping by absolute delta") {
  const auto records = records_with({1, 2, 3, 4, 5}, {0, 0, 0, 0, -4});
  const GroupedEntropies g = group_by_abs_delta(records);
  CHECK(g.low.size() == 4);
  CHECK(g.medium.empty());
  CHECK(g.high.size() == 1);
  CHECK(g.high[0].entropy == 5);
  CHECK(g.mean_abs_delta == doctest::Approx(0.8));
  CHECK(g.std_abs_delta == doctest::Approx(std::sqrt(3.2)));
  CHECK_THROWS_AS(group_by_abs_delta(records_with({1, 2, 3}, {2, -2, 2})), UndefinedStatisticError);
  CHECK_THROWS_AS(group_by_abs_delta(records_with({1}, {2})), ValidationError);
}

TEST_CASE("grouping partitions arbitrary input") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> normal;
  V e(200), d(200);
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = normal(rng);
    d[i] = normal(rng);
  }
  const GroupedEntropies g = group_by_abs_delta(records_with(e, d));
  CHECK(g.low.size() + g.medium.size() + g.high.size() == 200);
  CHECK(!g.medium.empty());
  std::vector<std::string> seen;
  for (const auto* group : {&g.low, &g.medium, &g.high}) {
    for (const auto& entry : *group) seen.push_back(entry.revision.id);
  }
  std::sort(seen.begin(), seen.end());
  CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

TEST_CASE("entropy outliers") {
  const auto split = filter_entropy_outliers(records_with({5, 5, 5, 5, 100}, {1, 2, 3, 4, 5}));
  REQUIRE(split.flagged.size() == 1);
  CHECK(split.flagged[0].entropy == 100);
  CHECK(split.kept.size() == 4);

  const auto flat = filter_entropy_outliers(records_with({3, 3, 3, 3}, {1, 2, 3, 4}));
  CHECK(flat.flagged.empty());
  CHECK(flat.kept.size() == 4);

  const auto mixed = filter_entropy_outliers(records_with({1, 2, 3, 4, 5, 6, -40}, {0, 0, 0, 0, 0, 0, 0}));
  CHECK(mixed.kept.size() + mixed.flagged.size() == 7);
  CHECK(mixed.flagged.size() == 1);
}
