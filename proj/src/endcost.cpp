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

#include "pimas/endcost.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

#include "pimas/errors.hpp"
#include "pimas/rng.hpp"

namespace pimas {

std::size_t table_index(std::span<const int> labels, int num_labels) {
  std::size_t index = 0;
  for (int label : labels) index = index * static_cast<std::size_t>(num_labels) + label;
  return index;
}

void FactoredEndCost::validate(int num_agents) const {
  if (num_labels < 1) throw ValidationError("end cost needs at least one label");
  if (!std::isfinite(constant_offset)) throw ValidationError("end cost offset is not finite");
  for (std::size_t f = 0; f < factors.size(); ++f) {
    const Factor& factor = factors[f];
    const std::string where = "end-cost factor " + std::to_string(f + 1);
    if (factor.scope.empty()) throw ValidationError(where + " has an empty scope");
    std::set<int> seen;
    for (int agent : factor.scope) {
      if (agent < 0 || agent >= num_agents) {
        throw ValidationError(where + " references agent " + std::to_string(agent + 1) +
                              " outside 1.." + std::to_string(num_agents));
      }
      if (!seen.insert(agent).second) {
        throw ValidationError(where + " repeats agent " + std::to_string(agent + 1));
      }
    }
    double expected = 1.0;
    for (std::size_t i = 0; i < factor.scope.size(); ++i) expected *= num_labels;
    if (static_cast<double>(factor.table.size()) != expected) {
      throw ValidationError(where + " table has " + std::to_string(factor.table.size()) +
                            " entries, expected " + std::to_string(expected));
    }
    for (double v : factor.table) {
      if (!std::isfinite(v)) throw ValidationError(where + " has a non-finite entry");
    }
  }
}

double FactoredEndCost::total(std::span<const int> labels) const {
  double sum = constant_offset;
  std::vector<int> local;
  for (const Factor& factor : factors) {
    local.clear();
    for (int agent : factor.scope) local.push_back(labels[agent]);
    sum += factor.table[table_index(local, num_labels)];
  }
  return sum;
}

std::vector<std::vector<int>> FactoredEndCost::scopes() const {
  std::vector<std::vector<int>> out;
  out.reserve(factors.size());
  for (const Factor& factor : factors) out.push_back(factor.scope);
  return out;
}

void RelationGraph::validate() const {
  if (num_nodes < 0) throw ValidationError("relation graph has negative node count");
  std::set<std::pair<int, int>> seen;
  for (const Relation& r : edges) {
    if (r.a < 0 || r.b < 0 || r.a >= num_nodes || r.b >= num_nodes) {
      throw ValidationError("relation (" + std::to_string(r.a + 1) + ", " +
                            std::to_string(r.b + 1) + ") references an unknown agent");
    }
    if (r.a == r.b) throw ValidationError("relation graph has a self-loop at agent " +
                                          std::to_string(r.a + 1));
    if (!std::isfinite(r.strength) || r.strength == 0.0) {
      throw ValidationError("relation strength must be finite and non-zero");
    }
    if (!seen.insert(std::minmax(r.a, r.b)).second) {
      throw ValidationError("relation (" + std::to_string(r.a + 1) + ", " +
                            std::to_string(r.b + 1) + ") appears twice");
    }
  }
}

double firemen_cost_dense(std::span<const int> labels, int num_targets, double c) {
  const int n = static_cast<int>(labels.size());
  std::vector<int> counts(num_targets, 0);
  for (int label : labels) {
    if (label < 0 || label >= num_targets) {
      throw ValidationError("label " + std::to_string(label + 1) + " outside 1.." +
                            std::to_string(num_targets));
    }
    ++counts[label];
  }
  const double share = static_cast<double>(n) / num_targets;
  double squared_deviation = 0.0;
  for (int count : counts) squared_deviation += (count - share) * (count - share);

  // sum_{a,b} [s_a == s_b] = sum_f count_f^2
  double coincidences = 0.0;
  for (int count : counts) coincidences += static_cast<double>(count) * count;
  const double pair_form = c * (coincidences - static_cast<double>(n) * n / num_targets);
  const double count_form = c * squared_deviation;
  if (std::abs(pair_form - count_form) > 1e-9 * std::max(1.0, std::abs(count_form))) {
    throw std::logic_error("firemen cost forms disagree");
  }
  return count_form;
}

FactoredEndCost firemen_factors(int num_agents, int num_targets, double c) {
  FactoredEndCost cost;
  cost.num_labels = num_targets;
  std::vector<double> same_target(static_cast<std::size_t>(num_targets) * num_targets, 0.0);
  for (int s = 0; s < num_targets; ++s) same_target[s * num_targets + s] = 2.0 * c;
  for (int a = 0; a < num_agents; ++a) {
    for (int b = a + 1; b < num_agents; ++b) cost.factors.push_back({{a, b}, same_target});
  }
  const double n = num_agents;
  cost.constant_offset = c * n - c * n * n / num_targets;
  return cost;
}

FactoredEndCost holiday_factors(const RelationGraph& graph, int num_targets) {
  FactoredEndCost cost;
  cost.num_labels = num_targets;
  for (const Relation& r : graph.edges) {
    std::vector<double> table(static_cast<std::size_t>(num_targets) * num_targets, 0.0);
    for (int s = 0; s < num_targets; ++s) table[s * num_targets + s] = -r.strength;
    cost.factors.push_back({{r.a, r.b}, std::move(table)});
  }
  return cost;
}

RelationGraph random_regular_graph(int num_nodes, int degree, double magnitude,
                                   std::uint64_t seed) {
  if (num_nodes < 1 || degree < 0) throw ValidationError("regular graph needs n >= 1, degree >= 0");
  if (degree >= num_nodes) {
    throw ValidationError("regular graph degree " + std::to_string(degree) +
                          " must be < n = " + std::to_string(num_nodes));
  }
  if ((static_cast<long>(num_nodes) * degree) % 2 != 0) {
    throw ValidationError("n * degree must be even for a regular graph");
  }
  if (!std::isfinite(magnitude) || !(magnitude > 0.0)) {
    throw ValidationError("relation strength magnitude must be > 0");
  }

  constexpr int kMaxAttempts = 100000;
  Rng rng(seed);
  std::vector<int> points(static_cast<std::size_t>(num_nodes) * degree);
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    for (std::size_t i = 0; i < points.size(); ++i) points[i] = static_cast<int>(i) / degree;
    for (std::size_t i = points.size(); i > 1; --i) {
      std::swap(points[i - 1], points[rng.below(i)]);
    }
    std::set<std::pair<int, int>> pairs;
    bool simple = true;
    for (std::size_t i = 0; i < points.size() && simple; i += 2) {
      const int a = points[i];
      const int b = points[i + 1];
      simple = a != b && pairs.insert(std::minmax(a, b)).second;
    }
    if (!simple) continue;

    RelationGraph graph;
    graph.num_nodes = num_nodes;
    for (const auto& [a, b] : pairs) {
      graph.edges.push_back({a, b, rng.coin() ? magnitude : -magnitude});
    }
    return graph;
  }
  throw GenerationError("pairing model found no simple " + std::to_string(degree) +
                        "-regular graph on " + std::to_string(num_nodes) + " nodes in " +
                        std::to_string(kMaxAttempts) + " attempts");
}

}  // namespace pimas
