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
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "pimas/errors.hpp"
#include "pimas/gaussian.hpp"
#include "pimas/io.hpp"
#include "pimas/pathint_mc.hpp"
#include "pimas/runner.hpp"
#include "pimas/validation.hpp"

namespace {

void print_sweep_statistics(const pimas::Scenario& scenario,
                            const std::vector<pimas::RunOutcome>& outcomes) {
  int ok = 0;
  int reached = 0;
  int relation_runs = 0;
  int clustered = 0;
  std::map<std::vector<int>, int> patterns;
  for (const auto& o : outcomes) {
    ok += o.ok;
    if (!o.ok) continue;
    reached += o.all_reached;
    ++patterns[o.counts];
    if (scenario.relations) {
      const int within = o.within_positive + o.within_negative;
      const int between = o.between_positive + o.between_negative;
      if (within > 0 && between > 0) {
        ++relation_runs;
        clustered += static_cast<double>(o.within_positive) / within >
                     static_cast<double>(o.between_positive) / between;
      }
    }
  }
  const double runs = static_cast<double>(outcomes.size());
  std::cout << "runs: " << outcomes.size() << " (" << ok << " ok)\n";
  std::cout << "all agents within " << pimas::kReachTolerance << " of a target: " << reached
            << " (" << reached / runs << ")\n";
  if (!patterns.empty()) {
    const auto modal = std::max_element(patterns.begin(), patterns.end(),
                                        [](const auto& a, const auto& b) { return a.second < b.second; });
    std::cout << "modal end-count pattern: (";
    for (std::size_t s = 0; s < modal->first.size(); ++s) std::cout << (s ? "," : "") << modal->first[s];
    std::cout << ") in " << modal->second << " runs (" << modal->second / runs << ")\n";
  }
  if (scenario.relations) {
    std::cout << "runs with higher positive-relation fraction within targets than between: "
              << clustered << " of " << relation_runs << "\n";
  }
}

int run_simulation(const std::string& scenario_ref, const std::string& seeds,
                   const std::string& out_dir, bool plots, bool marginals, int jobs,
                   bool report_sweep) {
  pimas::RunConfig config;
  config.scenario = scenario_ref;
  std::tie(config.first_seed, config.last_seed) = pimas::parse_seed_range(seeds);
  config.out_dir = out_dir;
  config.emit_plots = plots;
  config.record_marginals = marginals;
  config.jobs = jobs;
  const pimas::Scenario scenario = pimas::io::load_scenario(scenario_ref);
  const auto outcomes = pimas::run_seeds(scenario, config);
  if (report_sweep) {
    print_sweep_statistics(scenario, outcomes);
  } else {
    const auto& o = outcomes.front();
    std::cout << "seed " << o.seed << ": " << (o.ok ? "ok" : "error: " + o.error)
              << ", end time " << o.end_time << ", counts (";
    for (std::size_t s = 0; s < o.counts.size(); ++s) std::cout << (s ? "," : "") << o.counts[s];
    std::cout << ")\n";
  }
  std::cout << "output written to " << out_dir << "\n";
  const bool failed = std::any_of(outcomes.begin(), outcomes.end(), [](const auto& o) { return !o.ok; });
  return failed ? 1 : 0;
}

int run_mc_check(const std::string& scenario_ref, int samples, std::uint64_t seed, double dt,
                 int agent, double h, int threads) {
  const pimas::Scenario scenario = pimas::io::load_scenario(scenario_ref);
  if (agent < 1 || agent > scenario.num_agents()) {
    throw pimas::ValidationError("agent must lie in 1.." + std::to_string(scenario.num_agents()));
  }
  const pimas::ControlParams& params = scenario.params;
  const double t = scenario.initial.time();
  const double T = params.horizon();
  const Eigen::VectorXd x = scenario.initial.positions().row(agent - 1).transpose();
  const std::vector<double> weights(scenario.num_targets(), 0.0);

  pimas::mc::DiffusionSpec spec;
  spec.nu = params.noise();
  spec.lambda = params.temperature();
  spec.dt = dt > 0.0 ? dt : (T - t) / 1000.0;
  spec.threads = threads;
  if (!scenario.drift.is_zero()) {
    spec.drift = [d = scenario.drift](const Eigen::VectorXd& y, double s) { return d(y, s); };
  }
  if (!scenario.potential.is_zero()) {
    spec.potential = [v = scenario.potential](const Eigen::VectorXd& y, double s) { return v(y, s); };
  }
  const auto kernel = pimas::mc::EndKernel::quadratic(params.end_stiffness(), params.temperature());
  const auto draws = pimas::mc::sample_endpoints(x, t, spec, T, samples, seed);
  const auto est = pimas::mc::estimate_log_z(draws, kernel, scenario.targets, weights);
  const auto control = pimas::mc::mc_control(x, t, spec, T, kernel, scenario.targets, weights, h,
                                             samples, seed);

  std::cout << "log_z_estimate " << pimas::io::format_double(est.log_z) << "\n"
            << "log_z_se " << pimas::io::format_double(est.standard_error) << "\n"
            << "samples " << est.samples << "\n"
            << "survivors " << est.survivors << "\n";
  for (Eigen::Index d = 0; d < control.u.size(); ++d) {
    std::cout << "control_" << d + 1 << ' ' << pimas::io::format_double(control.u[d]) << " se "
              << pimas::io::format_double(control.standard_error[d]) << "\n";
  }
  if (scenario.drift.is_zero() && scenario.potential.is_zero()) {
    const double closed = pimas::gaussian::log_partition(x, t, scenario.targets, weights, params) +
                          pimas::mc::quadratic_kernel_log_offset(t, params, scenario.dim());
    const Eigen::VectorXd u = pimas::gaussian::mixture_control(x, t, scenario.targets, weights, params);
    std::cout << "log_z_closed_form " << pimas::io::format_double(closed) << "\n";
    for (Eigen::Index d = 0; d < u.size(); ++d) {
      std::cout << "control_closed_form_" << d + 1 << ' ' << pimas::io::format_double(u[d]) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Path-integral optimal control of multi-agent target assignment"};
  app.require_subcommand(1);

  std::string scenario = "firemen-2x2";
  std::string seed = "0";
  std::string seeds = "0..9";
  std::string out_dir = "out";
  bool plots = false;
  bool marginals = false;
  int jobs = 1;

  auto* simulate = app.add_subcommand("simulate", "Simulate one seeded trajectory");
  simulate->add_option("--scenario", scenario, "Built-in name or scenario JSON file");
  simulate->add_option("--seed", seed, "Noise seed");
  simulate->add_option("--out", out_dir, "Output directory");
  simulate->add_flag("--plots", plots, "Write an SVG plot per run");
  simulate->add_flag("--record-marginals", marginals, "Add p_a_s columns to the CSV");

  auto* sweep = app.add_subcommand("sweep", "Simulate a range of seeds and summarize");
  sweep->add_option("--scenario", scenario, "Built-in name or scenario JSON file");
  sweep->add_option("--seeds", seeds, "Inclusive seed range A..B");
  sweep->add_option("--out", out_dir, "Output directory");
  sweep->add_flag("--plots", plots, "Write an SVG plot per run");
  sweep->add_flag("--record-marginals", marginals, "Add p_a_s columns to the CSVs");
  sweep->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::string suite;
  std::string report;
  auto* validate = app.add_subcommand("validate", "Run numerical self-checks");
  validate->add_option("suite", suite, "gradient, oracle, montecarlo or all")->required();
  validate->add_option("--report", report, "Also write the JSON report to this file");

  int samples = 100000;
  std::uint64_t mc_seed = 1;
  double dt = 0.0;
  int agent = 1;
  double h = 1e-2;
  int threads = 1;
  auto* mc_check = app.add_subcommand("mc-check", "Monte-Carlo log Z and control for one agent");
  mc_check->add_option("--scenario", scenario, "Built-in name or scenario JSON file");
  mc_check->add_option("--samples", samples, "Sample count")->check(CLI::PositiveNumber);
  mc_check->add_option("--seed", mc_seed, "Sampling seed");
  mc_check->add_option("--dt", dt, "Sampler step (default (T - t)/1000)");
  mc_check->add_option("--agent", agent, "1-based agent whose start state is used");
  mc_check->add_option("--fd-step", h, "Finite-difference step");
  mc_check->add_option("--threads", threads, "Sampling threads")->check(CLI::PositiveNumber);

  std::string export_path;
  auto* export_cmd = app.add_subcommand("export-scenario", "Write a scenario as explicit JSON");
  export_cmd->add_option("--scenario", scenario, "Built-in name or scenario JSON file");
  export_cmd->add_option("--out", export_path, "Destination file (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) {
      return run_simulation(scenario, seed, out_dir, plots, marginals, 1, false);
    }
    if (sweep->parsed()) return run_simulation(scenario, seeds, out_dir, plots, marginals, jobs, true);
    if (validate->parsed()) {
      const auto results = pimas::validation::run_suite(suite);
      const std::string json = pimas::validation::to_json(results);
      std::cout << json;
      if (!report.empty()) std::ofstream(report) << json;
      for (const auto& r : results) {
        if (!r.passed) std::cerr << "FAILED " << r.suite << "/" << r.name << ": " << r.detail << "\n";
      }
      return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; }) ? 0 : 1;
    }
    if (mc_check->parsed()) return run_mc_check(scenario, samples, mc_seed, dt, agent, h, threads);
    if (export_cmd->parsed()) {
      const std::string text = pimas::io::dump_scenario(pimas::io::load_scenario(scenario));
      if (export_path.empty()) {
        std::cout << text;
      } else {
        std::ofstream(export_path) << text;
      }
      return 0;
    }
  } catch (const pimas::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
