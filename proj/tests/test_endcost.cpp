// Copyright 2026 The pimas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "doctest.h"
#include "pimas/endcost.hpp"
#include "pimas/errors.hpp"

using namespace pimas;

namespace {

// Calls fn(labels) for every labeling in {0..m-1}^n.
template <typename Fn>
void for_each_labeling(int n, int m, Fn fn) {
  std::vector<int> labels(n, 0);
  for (;;) {
    fn(labels);
    int a = n - 1;
    while (a >= 0 && ++labels[a] == m) labels[a--] = 0;
    if (a < 0) return;
  }
}

}  // namespace

TEST_CASE("firemen dense cost matches the two-agent table") {
  const std::vector<int> split{0, 1};
  const std::vector<int> split_rev{1, 0};
  const std::vector<int> same1{0, 0};
  const std::vector<int> same2{1, 1};
  CHECK(firemen_cost_dense(split, 2, 1.0) == 0.0);
  CHECK(firemen_cost_dense(split_rev, 2, 1.0) == 0.0);
  CHECK(firemen_cost_dense(same1, 2, 1.0) == 2.0);
  CHECK(firemen_cost_dense(same2, 2, 1.0) == 2.0);
  const std::vector<int> balanced{0, 1, 2, 0, 1, 2};
  CHECK(firemen_cost_dense(balanced, 3, 1.0) == 0.0);
  const std::vector<int> bad{0, 2};
  CHECK_THROWS_AS(firemen_cost_dense(bad, 2, 1.0), ValidationError);
}

TEST_CASE("firemen factored total equals the dense form") {
  const FactoredEndCost two = firemen_factors(2, 2, 1.0);
  const std::vector<int> same{0, 0};
  const std::vector<int> split{0, 1};
  CHECK(two.total(same) == 2.0);
  CHECK(two.total(split) == 0.0);

  int checked = 0;
  for_each_labeling(3, 2, [&](const std::vector<int>& s) {
    CHECK(firemen_factors(3, 2, 1.0).total(s) == doctest::Approx(firemen_cost_dense(s, 2, 1.0)));
    ++checked;
  });
  CHECK(checked == 8);

  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 3; ++m) {
      const double c = 0.7;
      const FactoredEndCost cost = firemen_factors(n, m, c);
      cost.validate(n);
      CHECK(cost.factors.size() == static_cast<std::size_t>(n * (n - 1) / 2));
      double worst = 0.0;
      for_each_labeling(n, m, [&](const std::vector<int>& s) {
        worst = std::max(worst, std::abs(cost.total(s) - firemen_cost_dense(s, m, c)));
      });
      CHECK(worst <= 1e-12);
    }
  }
}

TEST_CASE("firemen cost is minimal exactly on balanced labelings") {
  const FactoredEndCost cost = firemen_factors(4, 2, 1.0);
  double minimum = 1e300;
  for_each_labeling(4, 2, [&](const std::vector<int>& s) { minimum = std::min(minimum, cost.total(s)); });
  for_each_labeling(4, 2, [&](const std::vector<int>& s) {
    const auto ones = std::count(s.begin(), s.end(), 1);
    const bool balanced = ones == 2;
    CHECK((std::abs(cost.total(s) - minimum) < 1e-12) == balanced);
  });
}

TEST_CASE("holiday factors") {
  RelationGraph graph{4, {{0, 1, 1.0}, {1, 2, -1.0}, {0, 3, 2.5}}};
  const FactoredEndCost cost = holiday_factors(graph, 3);
  CHECK(cost.constant_offset == 0.0);
  REQUIRE(cost.factors.size() == 3);
  CHECK(cost.factors[0].scope == std::vector<int>{0, 1});
  const std::vector<int> together{1, 1};
  const std::vector<int> apart{0, 2};
  CHECK(cost.factors[0].table[table_index(together, 3)] == -1.0);
  CHECK(cost.factors[1].table[table_index(together, 3)] == 1.0);
  CHECK(cost.factors[0].table[table_index(apart, 3)] == 0.0);
  CHECK(cost.factors[2].table[table_index(together, 3)] == -2.5);
  // 2 and 3 are unrelated: no factor mentions both.
  for (const Factor& f : cost.factors) {
    const bool has2 = std::find(f.scope.begin(), f.scope.end(), 2) != f.scope.end();
    const bool has3 = std::find(f.scope.begin(), f.scope.end(), 3) != f.scope.end();
    CHECK_FALSE((has2 && has3));
  }
  const std::vector<int> s{2, 2, 2, 0};
  CHECK(cost.total(s) == doctest::Approx(-1.0 + 1.0));
}

TEST_CASE("random regular graph") {
  const RelationGraph g = random_regular_graph(42, 3, 1.0, 5);
  g.validate();
  CHECK(g.edges.size() == 63);
  std::vector<int> degree(42, 0);
  for (const Relation& r : g.edges) {
    ++degree[r.a];
    ++degree[r.b];
    CHECK(r.a < r.b);
    CHECK(std::abs(r.strength) == 1.0);
  }
  CHECK(std::all_of(degree.begin(), degree.end(), [](int d) { return d == 3; }));
  CHECK(random_regular_graph(42, 3, 1.0, 5) == g);
  CHECK_FALSE(random_regular_graph(42, 3, 1.0, 6) == g);

  const RelationGraph matching = random_regular_graph(4, 1, 1.0, 1);
  CHECK(matching.edges.size() == 2);
  std::vector<int> seen(4, 0);
  for (const Relation& r : matching.edges) {
    ++seen[r.a];
    ++seen[r.b];
  }
  CHECK(seen == std::vector<int>{1, 1, 1, 1});

  CHECK_THROWS_AS(random_regular_graph(3, 3, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(random_regular_graph(5, 3, 1.0, 1), ValidationError);
  CHECK_THROWS_AS(random_regular_graph(6, 2, 0.0, 1), ValidationError);
}

TEST_CASE("random regular graph signs are balanced and edges look uniform") {
  int positive = 0;
  int total = 0;
  std::map<std::pair<int, int>, int> pair_hits;
  for (std::uint64_t seed = 0; seed < 400; ++seed) {
    for (const Relation& r : random_regular_graph(8, 3, 1.0, seed).edges) {
      positive += r.strength > 0;
      ++total;
      ++pair_hits[{r.a, r.b}];
    }
  }
  const double fraction = static_cast<double>(positive) / total;
  CHECK(std::abs(fraction - 0.5) < 4.0 * std::sqrt(0.25 / total));
  // By symmetry every pair carries an edge with probability 3/7.
  CHECK(pair_hits.size() == 28);
  for (const auto& [pair, hits] : pair_hits) {
    CHECK(std::abs(hits / 400.0 - 3.0 / 7.0) < 0.1);
  }
}

TEST_CASE("end cost validation") {
  FactoredEndCost cost;
  cost.num_labels = 2;
  cost.factors.push_back({{0, 0}, {0, 0, 0, 0}});
  CHECK_THROWS_AS(cost.validate(2), ValidationError);
  cost.factors[0] = {{0, 2}, {0, 0, 0, 0}};
  CHECK_THROWS_AS(cost.validate(2), ValidationError);
  cost.factors[0] = {{0, 1}, {0, 0, 0}};
  CHECK_THROWS_AS(cost.validate(2), ValidationError);
  cost.factors[0] = {{}, {0.0}};
  CHECK_THROWS_AS(cost.validate(2), ValidationError);
  cost.factors[0] = {{1, 0}, {0, 1, 2, 3}};
  CHECK_NOTHROW(cost.validate(2));
  const std::vector<int> s{0, 1};  // agent 1 -> label 1, agent 0 -> label 0: index 1*2+0
  CHECK(cost.total(s) == 2.0);

  RelationGraph loop{3, {{1, 1, 1.0}}};
  CHECK_THROWS_AS(loop.validate(), ValidationError);
  RelationGraph twice{3, {{0, 1, 1.0}, {1, 0, -1.0}}};
  CHECK_THROWS_AS(twice.validate(), ValidationError);
}
