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

#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace pimas {

/// One term E_alpha(s_alpha) of a factored end cost.
///
/// Labels are 0-based in memory. The table is row-major over the scope in
/// scope order: the first agent of the scope is the most significant digit,
/// so table.size() == m^|scope|.
struct Factor {
  std::vector<int> scope;
  std::vector<double> table;

  bool operator==(const Factor&) const = default;
};

/// E(s) = constant_offset + sum over factors of E_alpha(s_alpha).
struct FactoredEndCost {
  int num_labels = 1;
  std::vector<Factor> factors;
  double constant_offset = 0.0;

  /// Throws ValidationError on empty or duplicate scopes, agent indices
  /// outside [0, num_agents), wrongly sized or non-finite tables.
  void validate(int num_agents) const;

  double total(std::span<const int> labels) const;

  std::vector<std::vector<int>> scopes() const;

  bool operator==(const FactoredEndCost&) const = default;
};

/// Index of `labels` (one per scope entry, 0-based) in a factor table.
std::size_t table_index(std::span<const int> labels, int num_labels);

/// Undirected relation with signed strength c_ab.
struct Relation {
  int a = 0;
  int b = 0;
  double strength = 0.0;

  bool operator==(const Relation&) const = default;
};

struct RelationGraph {
  int num_nodes = 0;
  std::vector<Relation> edges;

  /// No self-loops, no repeated pairs, finite non-zero strengths.
  void validate() const;

  bool operator==(const RelationGraph&) const = default;
};

/// Dense firemen cost c * sum_f (count_f - n/m)^2 for 0-based labels.
///
/// Also evaluates the pair-count form c * (sum_{a,b} [s_a == s_b] - n^2/m)
/// and throws std::logic_error if the two disagree beyond rounding.
double firemen_cost_dense(std::span<const int> labels, int num_targets, double c);

/// Pairwise factors 2c [s_a == s_b] for every unordered pair, with the
/// labeling-independent remainder c*n - c*n^2/m folded into the offset.
FactoredEndCost firemen_factors(int num_agents, int num_targets, double c);

/// One factor -c_ab [s_a == s_b] per relation; zero offset.
FactoredEndCost holiday_factors(const RelationGraph& graph, int num_targets);

/// Uniform simple `degree`-regular graph from the pairing model; each edge gets
/// strength +magnitude or -magnitude with equal probability. Deterministic
/// per seed; edges are returned sorted with a < b.
RelationGraph random_regular_graph(int num_nodes, int degree, double magnitude,
                                   std::uint64_t seed);

}  // namespace pimas
