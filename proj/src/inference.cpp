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

#include "pimas/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pimas/errors.hpp"
#include "pimas/numerics.hpp"

namespace pimas {
namespace {

void check_tables(const UnaryLogZTable& tables, const FactoredEndCost& end_cost, double lambda) {
  if (tables.rows() < 1) throw ValidationError("unary table has no agents");
  if (tables.cols() != end_cost.num_labels) {
    throw ValidationError("unary table has " + std::to_string(tables.cols()) +
                          " columns but the end cost has " + std::to_string(end_cost.num_labels) +
                          " labels");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be > 0");
  end_cost.validate(static_cast<int>(tables.rows()));
}

// Entry-wise map from a table over `scope` (sorted or not, row-major in scope
// order) to a table over `sub`, a subset of `scope` listed in its own order.
std::vector<std::uint32_t> project(const std::vector<int>& scope, const std::vector<int>& sub,
                                   int num_labels) {
  std::vector<std::uint32_t> sub_stride(scope.size(), 0);
  std::uint32_t stride = 1;
  for (std::size_t j = sub.size(); j-- > 0;) {
    const auto it = std::find(scope.begin(), scope.end(), sub[j]);
    sub_stride[static_cast<std::size_t>(it - scope.begin())] = stride;
    stride *= static_cast<std::uint32_t>(num_labels);
  }
  std::size_t size = 1;
  for (std::size_t j = 0; j < scope.size(); ++j) size *= static_cast<std::size_t>(num_labels);

  std::vector<std::uint32_t> map(size);
  std::vector<int> labels(scope.size(), 0);
  std::uint32_t index = 0;
  for (std::size_t e = 0; e < size; ++e) {
    map[e] = index;
    // odometer, last scope entry fastest
    for (std::size_t j = scope.size(); j-- > 0;) {
      if (++labels[j] < num_labels) {
        index += sub_stride[j];
        break;
      }
      labels[j] = 0;
      index -= sub_stride[j] * static_cast<std::uint32_t>(num_labels - 1);
    }
  }
  return map;
}

std::vector<double> grouped_log_sum_exp(const std::vector<double>& values,
                                        const std::vector<std::uint32_t>& group,
                                        std::size_t num_groups) {
  std::vector<double> peak(num_groups, kNegInf);
  for (std::size_t e = 0; e < values.size(); ++e) {
    peak[group[e]] = std::max(peak[group[e]], values[e]);
  }
  std::vector<double> sum(num_groups, 0.0);
  for (std::size_t e = 0; e < values.size(); ++e) {
    if (values[e] != kNegInf) sum[group[e]] += std::exp(values[e] - peak[group[e]]);
  }
  for (std::size_t g = 0; g < num_groups; ++g) {
    peak[g] = peak[g] == kNegInf ? kNegInf : peak[g] + std::log(sum[g]);
  }
  return peak;
}

}  // namespace

InferenceResult brute_force(const UnaryLogZTable& tables, const FactoredEndCost& end_cost,
                            double lambda, double max_states) {
  check_tables(tables, end_cost, lambda);
  const int n = static_cast<int>(tables.rows());
  const int m = end_cost.num_labels;
  const double states = std::pow(static_cast<double>(m), n);
  if (states > max_states) {
    throw SizeError("brute force over " + std::to_string(m) + "^" + std::to_string(n) +
                    " labelings exceeds the limit of " + std::to_string(max_states));
  }
  const auto count = static_cast<std::size_t>(states);

  auto score = [&](const std::vector<int>& labels) {
    double value = -end_cost.total(labels) / lambda;
    for (int a = 0; a < n; ++a) value += tables(a, labels[a]);
    return value;
  };
  auto advance = [&](std::vector<int>& labels) {
    for (int a = n; a-- > 0;) {
      if (++labels[a] < m) return;
      labels[a] = 0;
    }
  };

  std::vector<int> labels(n, 0);
  double peak = kNegInf;
  for (std::size_t i = 0; i < count; ++i, advance(labels)) peak = std::max(peak, score(labels));
  if (peak == kNegInf) throw DegeneratePosteriorError("every labeling has zero weight");

  Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, m);
  double total = 0.0;
  std::fill(labels.begin(), labels.end(), 0);
  for (std::size_t i = 0; i < count; ++i, advance(labels)) {
    const double w = std::exp(score(labels) - peak);
    total += w;
    for (int a = 0; a < n; ++a) mass(a, labels[a]) += w;
  }

  InferenceResult result;
  result.marginals = mass / total;
  result.log_partition = peak + std::log(total);
  return result;
}

EliminationOrder min_degree_order(std::span<const std::vector<int>> scopes, int num_agents) {
  std::vector<std::vector<char>> adjacent(num_agents, std::vector<char>(num_agents, 0));
  for (const auto& scope : scopes) {
    for (int a : scope) {
      if (a < 0 || a >= num_agents) throw ValidationError("factor scope references unknown agent");
      for (int b : scope) {
        if (a != b) adjacent[a][b] = 1;
      }
    }
  }

  EliminationOrder result;
  std::vector<char> alive(num_agents, 1);
  for (int step = 0; step < num_agents; ++step) {
    int best = -1;
    int best_degree = std::numeric_limits<int>::max();
    for (int v = 0; v < num_agents; ++v) {
      if (!alive[v]) continue;
      int degree = 0;
      for (int u = 0; u < num_agents; ++u) degree += alive[u] && adjacent[v][u];
      if (degree < best_degree) {
        best = v;
        best_degree = degree;
      }
    }
    std::vector<int> neighbours;
    for (int u = 0; u < num_agents; ++u) {
      if (alive[u] && adjacent[best][u]) neighbours.push_back(u);
    }
    for (int u : neighbours) {
      for (int w : neighbours) {
        if (u != w) adjacent[u][w] = 1;
      }
    }
    alive[best] = 0;
    result.order.push_back(best);
    result.induced_width = std::max(result.induced_width, best_degree);
  }
  return result;
}

JunctionTree::JunctionTree(const FactoredEndCost& end_cost, int num_agents,
                           const EliminationOrder& order, double max_clique_entries)
    : num_agents_(num_agents),
      num_labels_(end_cost.num_labels),
      constant_offset_(end_cost.constant_offset) {
  end_cost.validate(num_agents);
  const int n = num_agents;
  const int m = num_labels_;
  if (static_cast<int>(order.order.size()) != n) {
    throw ValidationError("elimination order must list every agent exactly once");
  }
  std::vector<int> position(n, -1);
  for (int i = 0; i < n; ++i) {
    const int v = order.order[i];
    if (v < 0 || v >= n || position[v] != -1) {
      throw ValidationError("elimination order must list every agent exactly once");
    }
    position[v] = i;
  }
  // Table indices are 32-bit.
  max_clique_entries = std::min(max_clique_entries, 4.0e9);

  std::vector<std::vector<char>> adjacent(n, std::vector<char>(n, 0));
  for (const Factor& factor : end_cost.factors) {
    for (int a : factor.scope) {
      for (int b : factor.scope) {
        if (a != b) adjacent[a][b] = 1;
      }
    }
  }

  cliques_.resize(n);
  std::vector<char> alive(n, 1);
  for (int i = 0; i < n; ++i) {
    Clique& clique = cliques_[i];
    const int v = order.order[i];
    clique.variable = v;
    clique.scope.push_back(v);
    for (int u = 0; u < n; ++u) {
      if (alive[u] && adjacent[v][u]) clique.scope.push_back(u);
    }
    for (std::size_t p = 1; p < clique.scope.size(); ++p) {
      for (std::size_t q = 1; q < clique.scope.size(); ++q) {
        if (p != q) adjacent[clique.scope[p]][clique.scope[q]] = 1;
      }
    }
    alive[v] = 0;
    std::sort(clique.scope.begin(), clique.scope.end());

    const double entries = std::pow(static_cast<double>(m), static_cast<double>(clique.scope.size()));
    if (entries > max_clique_entries) {
      std::string agents;
      for (int a : clique.scope) agents += (agents.empty() ? "" : ",") + std::to_string(a + 1);
      throw TreewidthError("eliminating agent " + std::to_string(v + 1) + " creates clique {" +
                           agents + "} with " + std::to_string(entries) +
                           " entries, above the cap of " + std::to_string(max_clique_entries));
    }
    clique.size = static_cast<std::size_t>(entries);
    width_ = std::max(width_, static_cast<int>(clique.scope.size()) - 1);
  }

  for (int i = 0; i < n; ++i) {
    Clique& clique = cliques_[i];
    std::vector<int> separator;
    int first = n;
    for (int a : clique.scope) {
      if (a == clique.variable) continue;
      separator.push_back(a);
      first = std::min(first, position[a]);
    }
    clique.to_variable = project(clique.scope, {clique.variable}, m);
    clique.unaries.push_back(clique.variable);
    clique.unary_maps.push_back(clique.to_variable);
    if (separator.empty()) continue;
    clique.parent = first;
    clique.separator_size = clique.size / static_cast<std::size_t>(m);
    clique.to_separator = project(clique.scope, separator, m);
    clique.to_parent_separator = project(cliques_[first].scope, separator, m);
    cliques_[first].children.push_back(i);
  }

  factor_tables_.reserve(end_cost.factors.size());
  for (std::size_t f = 0; f < end_cost.factors.size(); ++f) {
    const Factor& factor = end_cost.factors[f];
    int home = n;
    for (int a : factor.scope) home = std::min(home, position[a]);
    Clique& clique = cliques_[home];
    clique.factors.push_back(static_cast<int>(f));
    clique.factor_maps.push_back(project(clique.scope, factor.scope, m));
    factor_tables_.push_back(factor.table);
  }
}

InferenceResult JunctionTree::run(const UnaryLogZTable& tables, double lambda) const {
  if (tables.rows() != num_agents_ || tables.cols() != num_labels_) {
    throw ValidationError("unary table shape does not match the junction tree");
  }
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be > 0");
  const int n = num_agents_;
  const auto m = static_cast<std::size_t>(num_labels_);
  const double inv_lambda = 1.0 / lambda;

  std::vector<std::vector<double>> upward(n);
  std::vector<std::vector<double>> message_up(n);
  double log_z = -constant_offset_ * inv_lambda;

  for (int i = 0; i < n; ++i) {
    const Clique& clique = cliques_[i];
    std::vector<double>& belief = upward[i];
    belief.assign(clique.size, 0.0);
    for (std::size_t k = 0; k < clique.factors.size(); ++k) {
      const std::vector<double>& table = factor_tables_[clique.factors[k]];
      const std::vector<std::uint32_t>& map = clique.factor_maps[k];
      for (std::size_t e = 0; e < clique.size; ++e) belief[e] -= table[map[e]] * inv_lambda;
    }
    for (std::size_t k = 0; k < clique.unaries.size(); ++k) {
      const std::vector<std::uint32_t>& map = clique.unary_maps[k];
      const int agent = clique.unaries[k];
      for (std::size_t e = 0; e < clique.size; ++e) belief[e] += tables(agent, map[e]);
    }
    for (int child : clique.children) {
      const std::vector<double>& message = message_up[child];
      const std::vector<std::uint32_t>& map = cliques_[child].to_parent_separator;
      for (std::size_t e = 0; e < clique.size; ++e) belief[e] += message[map[e]];
    }
    if (clique.parent >= 0) {
      message_up[i] = grouped_log_sum_exp(belief, clique.to_separator, clique.separator_size);
    } else {
      log_z += log_sum_exp(belief);
    }
  }
  if (!std::isfinite(log_z)) throw DegeneratePosteriorError("every labeling has zero weight");

  std::vector<std::vector<double>> full(n);
  InferenceResult result;
  result.marginals.resize(n, static_cast<Eigen::Index>(m));
  result.log_partition = log_z;
  for (int i = n; i-- > 0;) {
    const Clique& clique = cliques_[i];
    full[i] = upward[i];
    if (clique.parent >= 0) {
      const std::vector<double>& parent = full[clique.parent];
      const std::vector<double>& up = message_up[i];
      std::vector<double> cavity(parent.size());
      for (std::size_t e = 0; e < parent.size(); ++e) {
        const double u = up[clique.to_parent_separator[e]];
        cavity[e] = u == kNegInf ? kNegInf : parent[e] - u;
      }
      const std::vector<double> down =
          grouped_log_sum_exp(cavity, clique.to_parent_separator, clique.separator_size);
      for (std::size_t e = 0; e < clique.size; ++e) full[i][e] += down[clique.to_separator[e]];
    }
    const std::vector<double> log_marginal = grouped_log_sum_exp(full[i], clique.to_variable, m);
    const double norm = log_sum_exp(log_marginal);
    for (std::size_t s = 0; s < m; ++s) {
      result.marginals(clique.variable, static_cast<Eigen::Index>(s)) =
          std::exp(log_marginal[s] - norm);
    }
  }
  return result;
}

InferenceResult eliminate(const UnaryLogZTable& tables, const FactoredEndCost& end_cost,
                          double lambda, const EliminationOrder& order, double max_clique_entries) {
  check_tables(tables, end_cost, lambda);
  return JunctionTree(end_cost, static_cast<int>(tables.rows()), order, max_clique_entries)
      .run(tables, lambda);
}

}  // namespace pimas
