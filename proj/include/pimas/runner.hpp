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
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pimas/controller.hpp"
#include "pimas/scenario.hpp"

namespace pimas {

/// Where each agent ended up. An agent is assigned to the nearest target when
/// it is within `tolerance` of it.
struct RunOutcome {
  std::uint64_t seed = 0;
  bool ok = true;
  std::string error;
  double end_time = 0.0;
  Eigen::MatrixXd end_positions;
  std::vector<int> labels;  // 0-based target per agent, -1 when none is within tolerance
  std::vector<int> counts;  // agents per target
  bool all_reached = false;
  // Relation statistics, filled when the scenario carries a relation graph.
  int within_positive = 0;
  int within_negative = 0;
  int between_positive = 0;
  int between_negative = 0;
};

inline constexpr double kReachTolerance = 0.15;

RunOutcome summarize(const Scenario& scenario, const Trajectory& trajectory,
                     double tolerance = kReachTolerance);

struct RunConfig {
  std::string scenario = "firemen-2x2";
  std::uint64_t first_seed = 0;
  std::uint64_t last_seed = 0;  // inclusive
  std::filesystem::path out_dir = "out";
  bool emit_plots = false;
  bool record_marginals = false;
  int jobs = 1;
};

/// Parses "A..B" (inclusive) or a single seed.
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text);

/// Simulates every seed in the range, writing trajectory_<seed>.csv (and .svg
/// with plots), then summary.csv and manifest.json once all runs finish.
/// Files depend only on scenario and seed, never on `jobs`.
std::vector<RunOutcome> run(const RunConfig& config);

/// Same as run() for an already loaded scenario; `out_dir` empty skips files.
std::vector<RunOutcome> run_seeds(const Scenario& scenario, const RunConfig& config);

std::string summary_csv(const Scenario& scenario, const std::vector<RunOutcome>& outcomes);

}  // namespace pimas
