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

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "pimas/controller.hpp"
#include "pimas/scenario.hpp"

namespace pimas::io {

/// Names accepted by builtin_scenario().
const std::vector<std::string>& builtin_names();

/// firemen-2x2, firemen-6x3 or holiday-42 with nu = R = 1, alpha = 1e3,
/// epsilon = 0.01, T = 1 and all agents starting at 0.
Scenario builtin_scenario(std::string_view name);

/// Built-in name, or path to a JSON scenario document.
Scenario load_scenario(const std::string& name_or_path);

/// Parses a JSON scenario document. Errors carry line/column or field path.
Scenario parse_scenario(std::string_view text);

/// Writes the scenario with explicit factors and edges; parse_scenario() of the
/// result yields an equal Scenario.
std::string dump_scenario(const Scenario& scenario);

/// Shortest decimal string that parses back to the same double.
std::string format_double(double value);

/// Header: t, x_*, u_*, mubar_* and, with marginals, p_a_s for s = 1..m-1
/// (p_a_m is implied). Agent columns are 1-based; for k > 1 each vector
/// column carries a _d suffix.
std::vector<std::string> trajectory_header(int num_agents, int dim, int num_targets,
                                           bool record_marginals);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory, bool record_marginals);

/// Inverse of write_trajectory_csv. The implied last marginal column is
/// reconstructed as one minus the others.
Trajectory read_trajectory_csv(std::istream& in, const ControlParams& params, int num_agents,
                               int dim, int num_targets, bool record_marginals);

/// Two stacked panels: x_a(t) and mubar_a(t) (first coordinate), one colour
/// per agent, dashed lines at the targets.
std::string trajectory_svg(const Trajectory& trajectory, const TargetSet& targets,
                           std::string_view title);

}  // namespace pimas::io
