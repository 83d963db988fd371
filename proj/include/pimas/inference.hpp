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

#include <Eigen/Dense>

#include "pimas/endcost.hpp"

namespace pimas {

/// n x m table of log Z_a(x_a, t; s).
using UnaryLogZTable = Eigen::MatrixXd;

/// Posterior over full labelings s, summarized by
///   p(s) proportional to exp(-E(s)/lambda + sum_a log Z_a(s_a)).
struct InferenceResult {
  Eigen::MatrixXd marginals;  // n x m, row a is p(s_a | x, t)
  double log_partition = 0.0;
};

struct EliminationOrder {
  std::vector<int> order;
  int induced_width = 0;
};

/// Exhaustive sum over all m^n labelings. Throws SizeError above max_states.
InferenceResult brute_force(const UnaryLogZTable& tables, const FactoredEndCost& end_cost,
                            double lambda, double max_states = 1e7);

/// Greedy minimum-degree elimination on the interaction graph of `scopes`,
/// ties broken by lowest agent index. induced_width is the largest
/// (eliminated variable + remaining neighbours) set minus one.
EliminationOrder min_degree_order(std::span<const std::vector<int>> scopes, int num_agents);

/// Clique tree produced by variable elimination, with all index maps
/// precomputed. Build once per factor structure, then call run() for each new
/// set of unary tables; the structure and end-cost tables are fixed.
class JunctionTree {
 public:
  /// Throws TreewidthError when a clique would need more than
  /// max_clique_entries table entries.
  JunctionTree(const FactoredEndCost& end_cost, int num_agents, const EliminationOrder& order,
               double max_clique_entries = 1e8);

  /// Two-pass log-domain sum-product; returns every marginal and log Z.
  InferenceResult run(const UnaryLogZTable& tables, double lambda) const;

  int num_agents() const { return num_agents_; }
  int num_labels() const { return num_labels_; }
  /// Largest clique size minus one.
  int width() const { return width_; }

 private:
  struct Clique {
    int variable = 0;            // agent eliminated here
    std::vector<int> scope;      // sorted agents
    std::size_t size = 0;        // m^|scope|
    int parent = -1;             // clique index, -1 for a root
    std::size_t separator_size = 0;
    std::vector<std::uint32_t> to_separator;         // clique entry -> separator entry
    std::vector<std::uint32_t> to_parent_separator;  // parent entry -> separator entry
    std::vector<std::uint32_t> to_variable;          // clique entry -> label of `variable`
    std::vector<int> children;
    std::vector<int> factors;                        // end-cost factors assigned here
    std::vector<std::vector<std::uint32_t>> factor_maps;
    std::vector<int> unaries;                        // agents whose unary table lands here
    std::vector<std::vector<std::uint32_t>> unary_maps;
  };

  int num_agents_;
  int num_labels_;
  int width_ = 0;
  double constant_offset_;
  std::vector<std::vector<double>> factor_tables_;
  std::vector<Clique> cliques_;  // in elimination order
};

/// Variable elimination along `order`; equal to brute_force up to rounding.
InferenceResult eliminate(const UnaryLogZTable& tables, const FactoredEndCost& end_cost,
                          double lambda, const EliminationOrder& order,
                          double max_clique_entries = 1e8);

}  // namespace pimas
