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

#include "pimas/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pimas/errors.hpp"
#include "pimas/io.hpp"

namespace pimas {
namespace {

std::string seed_stem(std::uint64_t seed) { return "trajectory_" + std::to_string(seed); }

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << contents;
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace

RunOutcome summarize(const Scenario& scenario, const Trajectory& trajectory, double tolerance) {
  RunOutcome outcome;
  outcome.seed = trajectory.seed;
  outcome.end_time = trajectory.end_time;
  const int m = scenario.num_targets();
  outcome.counts.assign(m, 0);
  if (trajectory.records.empty()) {
    outcome.ok = false;
    return outcome;
  }
  outcome.end_positions = trajectory.records.back().x;
  const int n = static_cast<int>(outcome.end_positions.rows());
  outcome.labels.assign(n, -1);
  outcome.all_reached = true;
  for (int a = 0; a < n; ++a) {
    int best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (int s = 0; s < m; ++s) {
      const double dist =
          (outcome.end_positions.row(a) - scenario.targets.positions().row(s)).norm();
      if (dist < best_dist) {
        best = s;
        best_dist = dist;
      }
    }
    if (best_dist <= tolerance) {
      outcome.labels[a] = best;
      ++outcome.counts[best];
    } else {
      outcome.all_reached = false;
    }
  }
  if (scenario.relations) {
    for (const Relation& r : scenario.relations->edges) {
      const int la = outcome.labels[r.a];
      const int lb = outcome.labels[r.b];
      if (la < 0 || lb < 0) continue;
      const bool positive = r.strength > 0.0;
      if (la == lb) {
        (positive ? outcome.within_positive : outcome.within_negative) += 1;
      } else {
        (positive ? outcome.between_positive : outcome.between_negative) += 1;
      }
    }
  }
  return outcome;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  auto parse = [&](std::string_view part) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(part.data(), part.data() + part.size(), value);
    if (res.ec != std::errc() || res.ptr != part.data() + part.size() || part.empty()) {
      throw ValidationError("invalid seed range '" + text + "', expected N or A..B");
    }
    return value;
  };
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto seed = parse(text);
    return {seed, seed};
  }
  const auto first = parse(std::string_view(text).substr(0, dots));
  const auto last = parse(std::string_view(text).substr(dots + 2));
  if (last < first) throw ValidationError("seed range '" + text + "' is empty");
  return {first, last};
}

std::vector<RunOutcome> run(const RunConfig& config) {
  return run_seeds(io::load_scenario(config.scenario), config);
}

std::vector<RunOutcome> run_seeds(const Scenario& scenario, const RunConfig& config) {
  if (config.last_seed < config.first_seed) throw ValidationError("seed range is empty");
  const bool write = !config.out_dir.empty();
  if (write) std::filesystem::create_directories(config.out_dir);

  const JointController controller(scenario);
  const std::size_t count = config.last_seed - config.first_seed + 1;
  std::vector<RunOutcome> outcomes(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const std::uint64_t seed = config.first_seed + i;
      Trajectory trajectory{seed, scenario.params, {}, scenario.initial.time()};
      std::string error;
      try {
        SeededNoise noise(seed);
        trajectory = simulate(scenario, controller, noise, seed);
      } catch (const SimulationError& e) {
        trajectory = e.partial();
        error = e.what();
      } catch (const std::exception& e) {
        error = e.what();
      }
      try {
        if (write && !trajectory.records.empty()) {
          std::ostringstream csv;
          io::write_trajectory_csv(csv, trajectory, config.record_marginals);
          write_file(config.out_dir / (seed_stem(seed) + ".csv"), csv.str());
          if (config.emit_plots) {
            write_file(config.out_dir / (seed_stem(seed) + ".svg"),
                       io::trajectory_svg(trajectory, scenario.targets,
                                          scenario.name + ", seed " + std::to_string(seed)));
          }
        }
      } catch (const std::exception& e) {
        error = error.empty() ? e.what() : error + "; " + e.what();
      }
      outcomes[i] = summarize(scenario, trajectory);
      outcomes[i].seed = seed;
      if (!error.empty()) {
        outcomes[i].ok = false;
        outcomes[i].error = error;
      }
    }
  };
  const int jobs = static_cast<int>(std::clamp<std::size_t>(std::max(config.jobs, 1), 1, count));
  {
    std::vector<std::jthread> pool;
    for (int j = 1; j < jobs; ++j) pool.emplace_back(worker);
    worker();
  }

  if (write) {
    write_file(config.out_dir / "summary.csv", summary_csv(scenario, outcomes));
    nlohmann::json manifest;
    manifest["scenario"] = scenario.name;
    manifest["first_seed"] = config.first_seed;
    manifest["last_seed"] = config.last_seed;
    manifest["record_marginals"] = config.record_marginals;
    manifest["runs"] = nlohmann::json::array();
    for (const RunOutcome& o : outcomes) {
      nlohmann::json entry = {{"seed", o.seed},
                              {"status", o.ok ? "ok" : "error"},
                              {"csv", seed_stem(o.seed) + ".csv"}};
      if (config.emit_plots) entry["svg"] = seed_stem(o.seed) + ".svg";
      if (!o.ok) entry["error"] = o.error;
      manifest["runs"].push_back(std::move(entry));
    }
    write_file(config.out_dir / "manifest.json", manifest.dump(2) + "\n");
  }
  return outcomes;
}

std::string summary_csv(const Scenario& scenario, const std::vector<RunOutcome>& outcomes) {
  const int n = scenario.num_agents();
  const int m = scenario.num_targets();
  const int k = scenario.dim();
  std::ostringstream out;
  out << "seed,status,end_time,all_reached";
  for (int s = 1; s <= m; ++s) out << ",count_" << s;
  if (scenario.relations) out << ",within_pos,within_neg,between_pos,between_neg";
  for (int a = 1; a <= n; ++a) out << ",label_" << a;
  for (int a = 1; a <= n; ++a) {
    if (k == 1) {
      out << ",x_end_" << a;
    } else {
      for (int d = 1; d <= k; ++d) out << ",x_end_" << a << '_' << d;
    }
  }
  out << '\n';
  for (const RunOutcome& o : outcomes) {
    out << o.seed << ',' << (o.ok ? "ok" : "error") << ',' << io::format_double(o.end_time) << ','
        << (o.all_reached ? 1 : 0);
    for (int s = 0; s < m; ++s) out << ',' << (s < static_cast<int>(o.counts.size()) ? o.counts[s] : 0);
    if (scenario.relations) {
      out << ',' << o.within_positive << ',' << o.within_negative << ',' << o.between_positive
          << ',' << o.between_negative;
    }
    for (int a = 0; a < n; ++a) {
      out << ',' << (a < static_cast<int>(o.labels.size()) ? o.labels[a] + 1 : 0);
    }
    for (int a = 0; a < n; ++a) {
      for (int d = 0; d < k; ++d) {
        out << ',';
        if (a < o.end_positions.rows()) out << io::format_double(o.end_positions(a, d));
      }
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace pimas
