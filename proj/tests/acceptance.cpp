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

// Acceptance run: one PASS/FAIL line per criterion with the measured value
// and the pinned tolerance. Exits non-zero when any criterion fails, unless the
// failing set is exactly the one passed via --expect-fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pimas/controller.hpp"
#include "pimas/endcost.hpp"
#include "pimas/io.hpp"
#include "pimas/runner.hpp"
#include "pimas/validation.hpp"

using namespace pimas;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Verdict {
  int id;
  bool passed;
  std::string detail;
};

void report(std::vector<Verdict>& out, int id, bool passed, const std::string& detail) {
  std::printf("[%s] criterion %d: %s\n", passed ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
  out.push_back({id, passed, detail});
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

// Suite criteria: every check passes and the whole suite fits the time budget.
void suite_criterion(std::vector<Verdict>& out, int id, const std::string& label,
                     const std::vector<validation::CheckResult>& checks, double seconds,
                     double budget) {
  bool all = true;
  std::ostringstream detail;
  detail << label << ":";
  for (const auto& c : checks) {
    all = all && c.passed;
    detail << " " << c.name << "=" << c.measured << "(<=" << c.tolerance << ")";
  }
  detail << "; " << fmt("%.2f s (< %.0f s)", seconds, budget);
  report(out, id, all && seconds < budget, detail.str());
}

void end_cost_criterion(std::vector<Verdict>& out) {
  const FactoredEndCost two = firemen_factors(2, 2, 1.0);
  const int e11 = static_cast<int>(two.total(std::vector<int>{0, 0}));
  const bool table_ok = two.total(std::vector<int>{0, 0}) == 2.0 &&
                        two.total(std::vector<int>{1, 1}) == 2.0 &&
                        two.total(std::vector<int>{0, 1}) == 0.0 &&
                        two.total(std::vector<int>{1, 0}) == 0.0;
  double worst = 0.0;
  long long assignments = 0;
  for (int n = 1; n <= 8; ++n) {
    for (int m = 1; m <= 3; ++m) {
      for (double c : {1.0, 0.5, 2.5}) {
        const FactoredEndCost factored = firemen_factors(n, m, c);
        std::vector<int> labels(n, 0);
        while (true) {
          const double dense = firemen_cost_dense(labels, m, c);
          worst = std::max(worst, std::abs(factored.total(labels) - dense) /
                                      std::max(1.0, std::abs(dense)));
          ++assignments;
          int a = 0;
          while (a < n && ++labels[a] == m) labels[a++] = 0;
          if (a == n) break;
        }
      }
    }
  }
  report(out, 3, table_ok && worst <= 1e-12,
         fmt("2x2 table E(1,1)=%d %s; factored vs dense max rel diff %.2e (<= 1e-12) over %lld "
             "assignments, n<=8, m<=3",
             e11, table_ok ? "matches {2,0;0,2}" : "MISMATCH", worst, assignments));
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pimas_acceptance_" + name);
  fs::remove_all(dir);
  return dir;
}

std::vector<RunOutcome> sweep(const std::string& scenario, std::uint64_t last, int jobs,
                              const fs::path& dir, double& seconds) {
  RunConfig config;
  config.scenario = scenario;
  config.first_seed = 0;
  config.last_seed = last;
  config.out_dir = dir;
  config.jobs = jobs;
  const auto start = Clock::now();
  auto outcomes = run(config);
  seconds = seconds_since(start);
  return outcomes;
}

void firemen_2x2_criterion(std::vector<Verdict>& out) {
  double seconds = 0.0;
  const fs::path dir = scratch("2x2");
  const auto outcomes = sweep("firemen-2x2", 99, 1, dir, seconds);
  int split = 0;
  for (const auto& o : outcomes) split += o.ok && o.counts == std::vector<int>{1, 1};
  // Under the optimal control the end assignment follows the prior posterior,
  // so a split happens with probability 1 / (1 + exp(-2)).
  const double rate = 1.0 / (1.0 + std::exp(-2.0));
  report(out, 4, split >= 90 && seconds < 60.0,
         fmt("firemen-2x2 seeds 0..99: %d/100 runs end one agent per target (>= 90); "
             "model split probability %.3f; %.2f s (< 60 s)",
             split, rate, seconds));
  fs::remove_all(dir);
}

void firemen_6x3_criterion(std::vector<Verdict>& out) {
  double seconds = 0.0;
  const fs::path dir = scratch("6x3");
  const auto outcomes = sweep("firemen-6x3", 99, 1, dir, seconds);
  std::map<std::vector<int>, int> patterns;
  int reached = 0;
  for (const auto& o : outcomes) {
    if (!o.ok) continue;
    reached += o.all_reached;
    if (o.all_reached) ++patterns[o.counts];
  }
  std::vector<int> modal;
  int modal_count = 0;
  for (const auto& [pattern, count] : patterns) {
    if (count > modal_count) {
      modal = pattern;
      modal_count = count;
    }
  }
  const bool modal_ok = modal == std::vector<int>{2, 2, 2};
  std::string shape = "(";
  for (std::size_t i = 0; i < modal.size(); ++i) shape += (i ? "," : "") + std::to_string(modal[i]);
  shape += ")";
  report(out, 5, modal_ok && modal_count >= 60 && reached >= 95 && seconds < 300.0,
         fmt("firemen-6x3 seeds 0..99: modal pattern %s in %d/100 (want (2,2,2), >= 60); all "
             "agents reached in %d/100 (>= 95); %.1f s (< 300 s)",
             shape.c_str(), modal_count, reached, seconds));
  fs::remove_all(dir);
}

void holiday_criterion(std::vector<Verdict>& out) {
  const Scenario s = io::builtin_scenario("holiday-42");
  const JointController controller(s);
  const int width = controller.induced_width();

  // Single control steps at the start, where every posterior is broad.
  double probe_max = 0.0;
  for (int i = 0; i < 5; ++i) {
    const auto start = Clock::now();
    controller.control(s.initial);
    probe_max = std::max(probe_max, seconds_since(start));
  }

  double slowest_run = 0.0;
  double slowest_step = 0.0;
  int all_reached = 0;
  int clustered = 0;
  int failed = 0;
  constexpr int kSeeds = 20;
  for (int seed = 0; seed < kSeeds; ++seed) {
    const auto start = Clock::now();
    try {
      SeededNoise noise(static_cast<std::uint64_t>(seed));
      const Trajectory tr = simulate(s, controller, noise, static_cast<std::uint64_t>(seed));
      const double elapsed = seconds_since(start);
      slowest_run = std::max(slowest_run, elapsed);
      slowest_step = std::max(slowest_step, elapsed / static_cast<double>(tr.records.size()));
      const RunOutcome o = summarize(s, tr);
      all_reached += o.all_reached;
      const int within = o.within_positive + o.within_negative;
      const int between = o.between_positive + o.between_negative;
      if (within > 0 && between > 0 &&
          static_cast<double>(o.within_positive) / within >
              static_cast<double>(o.between_positive) / between) {
        ++clustered;
      }
    } catch (const Error&) {
      ++failed;
    }
  }
  const bool ok = width <= 10 && std::max(probe_max, slowest_step) < 1.0 && slowest_run < 600.0 &&
                  failed == 0 && all_reached == kSeeds && clustered >= 18;
  report(out, 6, ok,
         fmt("holiday-42: induced width %d (<= 10); control step max probe %.3f s, slowest mean "
             "step %.3f s (< 1 s); slowest trajectory %.1f s (< 600 s); all agents within 0.15 in "
             "%d/%d runs (all); within-target positive fraction higher in %d/%d runs (>= 18); "
             "%d failed runs",
             width, probe_max, slowest_step, slowest_run, all_reached, kSeeds, clustered, kSeeds,
             failed));
}

std::string read_all(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void determinism_criterion(std::vector<Verdict>& out) {
  int files = 0;
  int mismatches = 0;
  for (const std::string scenario : {"firemen-2x2", "firemen-6x3"}) {
    double seconds = 0.0;
    const fs::path a = scratch(scenario + "_a");
    const fs::path b = scratch(scenario + "_b");
    const fs::path c = scratch(scenario + "_c");
    sweep(scenario, 11, 1, a, seconds);
    sweep(scenario, 11, 1, b, seconds);
    sweep(scenario, 11, 4, c, seconds);
    for (const auto& entry : fs::directory_iterator(a)) {
      if (entry.path().extension() != ".csv") continue;
      const std::string reference = read_all(entry.path());
      const fs::path name = entry.path().filename();
      ++files;
      if (reference.empty() || reference != read_all(b / name) || reference != read_all(c / name)) {
        ++mismatches;
      }
    }
    fs::remove_all(a);
    fs::remove_all(b);
    fs::remove_all(c);
  }
  report(out, 8, files == 26 && mismatches == 0,
         fmt("%d CSV files (12 seeds x 2 scenarios + summaries) compared across two serial runs "
             "and a 4-job run: %d differ (0)",
             files, mismatches));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pimas acceptance run"};
  std::vector<int> expected_failures;
  app.add_option("--expect-fail", expected_failures,
                 "criteria known to fail; exit 0 only if exactly these fail");
  CLI11_PARSE(app, argc, argv);

  std::vector<Verdict> verdicts;
  {
    const auto start = Clock::now();
    const auto checks = validation::gradient_suite();
    suite_criterion(verdicts, 1, "gradient, 1000 instances", checks, seconds_since(start), 10.0);
  }
  {
    const auto start = Clock::now();
    const auto checks = validation::oracle_suite();
    suite_criterion(verdicts, 2, "oracle, 200 instances", checks, seconds_since(start), 30.0);
  }
  end_cost_criterion(verdicts);
  firemen_2x2_criterion(verdicts);
  firemen_6x3_criterion(verdicts);
  holiday_criterion(verdicts);
  {
    const auto start = Clock::now();
    const auto checks = validation::montecarlo_suite();
    suite_criterion(verdicts, 7, "montecarlo, N = 1e5", checks, seconds_since(start), 60.0);
  }
  determinism_criterion(verdicts);

  std::set<int> failed;
  for (const auto& v : verdicts) {
    if (!v.passed) failed.insert(v.id);
  }
  const std::set<int> expected(expected_failures.begin(), expected_failures.end());
  std::printf("%zu/%zu criteria passed\n", verdicts.size() - failed.size(), verdicts.size());
  if (!expected.empty()) {
    const bool match = failed == expected;
    std::printf("failing set %s the declared known failures\n", match ? "matches" : "DIFFERS from");
    return match ? 0 : 1;
  }
  return failed.empty() ? 0 : 1;
}
