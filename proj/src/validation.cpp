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

#include "pimas/validation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"
#include "pimas/controller.hpp"
#include "pimas/errors.hpp"
#include "pimas/gaussian.hpp"
#include "pimas/inference.hpp"
#include "pimas/pathint_mc.hpp"
#include "pimas/rng.hpp"

namespace pimas::validation {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * rng.uniform(); }

int uniform_int(Rng& rng, int lo, int hi) {
  return lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
}

ControlParams random_params(Rng& rng) {
  const double alpha = std::exp(uniform(rng, std::log(1.0), std::log(100.0)));
  return ControlParams(uniform(rng, 0.5, 2.0), uniform(rng, 0.5, 2.0), alpha, 0.01,
                       uniform(rng, 0.5, 2.0));
}

Eigen::MatrixXd random_points(Rng& rng, int rows, int cols, double half_width) {
  Eigen::MatrixXd p(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int d = 0; d < cols; ++d) p(i, d) = uniform(rng, -half_width, half_width);
  }
  return p;
}

FactoredEndCost random_pairwise(Rng& rng, int n, int m, double range) {
  FactoredEndCost cost;
  cost.num_labels = m;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (rng.uniform() < 0.5) continue;
      std::vector<double> table(static_cast<std::size_t>(m) * m);
      for (double& v : table) v = uniform(rng, -range, range);
      cost.factors.push_back({{a, b}, std::move(table)});
    }
  }
  return cost;
}

}  // namespace

std::vector<CheckResult> gradient_suite(int instances, std::uint64_t seed) {
  std::vector<CheckResult> results;
  constexpr double h = 1e-5;
  {
    const auto start = Clock::now();
    Rng rng(seed);
    double worst_ratio = 0.0;
    double worst_error = 0.0;
    for (int i = 0; i < instances; ++i) {
      const ControlParams params = random_params(rng);
      const int k = uniform_int(rng, 1, 3);
      const int m = uniform_int(rng, 1, 4);
      const double t = uniform(rng, 0.0, 0.9 * params.horizon());
      const TargetSet targets(random_points(rng, m, k, 2.0));
      const Eigen::VectorXd x = random_points(rng, 1, k, 2.0).row(0).transpose();
      std::vector<double> log_w(m);
      for (double& w : log_w) w = uniform(rng, -3.0, 3.0);

      const Eigen::VectorXd analytic = gaussian::mixture_control(x, t, targets, log_w, params);
      Eigen::VectorXd numeric(k);
      for (int d = 0; d < k; ++d) {
        Eigen::VectorXd plus = x;
        Eigen::VectorXd minus = x;
        plus[d] += h;
        minus[d] -= h;
        numeric[d] = params.noise() *
                     (gaussian::log_partition(plus, t, targets, log_w, params) -
                      gaussian::log_partition(minus, t, targets, log_w, params)) /
                     (2.0 * h);
      }
      const double error = (numeric - analytic).norm();
      const double allowed = std::max(1e-6 * analytic.norm(), 1e-9);
      worst_error = std::max(worst_error, error);
      worst_ratio = std::max(worst_ratio, error / allowed);
    }
    CheckResult r;
    r.suite = "gradient";
    r.name = "single_agent_mixture_control";
    r.measured = worst_ratio;
    r.tolerance = 1.0;
    r.passed = worst_ratio <= 1.0;
    r.detail = std::to_string(instances) + " instances; worst |fd - analytic| = " +
               std::to_string(worst_error) +
               "; measured is the worst error / max(1e-6 |u|, 1e-9)";
    r.seconds = seconds_since(start);
    results.push_back(r);
  }
  {
    const auto start = Clock::now();
    Rng rng(seed + 1000);
    const int joint_instances = std::max(1, instances / 5);
    double worst_relative = 0.0;
    for (int i = 0; i < joint_instances; ++i) {
      const ControlParams params = random_params(rng);
      const int n = uniform_int(rng, 2, 5);
      const int m = uniform_int(rng, 2, 3);
      const int k = uniform_int(rng, 1, 2);
      const double t = uniform(rng, 0.0, 0.9 * params.horizon());
      FactoredEndCost cost = rng.coin() ? firemen_factors(n, m, uniform(rng, 0.2, 2.0))
                                        : random_pairwise(rng, n, m, 3.0);
      Scenario scenario{"gradient", TargetSet(random_points(rng, m, k, 2.0)), std::move(cost),
                        params, JointState(t, random_points(rng, n, k, 2.0)), {}, {}, {}};
      const ControlOutput out = joint_control(scenario.initial, scenario);
      const Eigen::MatrixXd numeric = numeric_control_check(scenario.initial, scenario, h);
      const double scale = std::max(out.u.norm(), 1e-4);
      worst_relative = std::max(worst_relative, (numeric - out.u).norm() / scale);
    }
    CheckResult r;
    r.suite = "gradient";
    r.name = "multi_agent_joint_control";
    r.measured = worst_relative;
    r.tolerance = 1e-5;
    r.passed = worst_relative <= 1e-5;
    r.detail = std::to_string(joint_instances) +
               " instances; worst |fd - joint| / max(|joint|, 1e-4)";
    r.seconds = seconds_since(start);
    results.push_back(r);
  }
  return results;
}

std::vector<CheckResult> oracle_suite(int instances, std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  double worst_marginal = 0.0;
  double worst_log_z = 0.0;
  double worst_norm = 0.0;
  double worst_offset = 0.0;
  int max_width = 0;
  const double lambdas[] = {0.5, 1.0, 2.0};
  for (int i = 0; i < instances; ++i) {
    const int n = uniform_int(rng, 2, 8);
    const int m = uniform_int(rng, 2, 3);
    const double lambda = lambdas[rng.below(3)];
    UnaryLogZTable tables(n, m);
    for (int a = 0; a < n; ++a) {
      for (int s = 0; s < m; ++s) tables(a, s) = uniform(rng, -5.0, 5.0);
    }
    FactoredEndCost cost = random_pairwise(rng, n, m, 3.0);
    const auto scopes = cost.scopes();
    const EliminationOrder order = min_degree_order(scopes, n);
    max_width = std::max(max_width, order.induced_width);

    const InferenceResult exact = brute_force(tables, cost, lambda);
    const InferenceResult fast = eliminate(tables, cost, lambda, order);
    worst_marginal = std::max(worst_marginal, (exact.marginals - fast.marginals).cwiseAbs().maxCoeff());
    worst_log_z = std::max(worst_log_z, std::abs(exact.log_partition - fast.log_partition));
    worst_norm = std::max(
        worst_norm, (fast.marginals.rowwise().sum().array() - 1.0).abs().maxCoeff());

    constexpr double shift = 3.7;
    FactoredEndCost shifted = cost;
    for (Factor& f : shifted.factors) {
      for (double& v : f.table) v += shift;
    }
    const InferenceResult moved = eliminate(tables, shifted, lambda, order);
    const double expected_shift = -shift * static_cast<double>(cost.factors.size()) / lambda;
    worst_offset = std::max({worst_offset,
                             std::abs(moved.log_partition - fast.log_partition - expected_shift),
                             (moved.marginals - fast.marginals).cwiseAbs().maxCoeff()});
  }
  const double elapsed = seconds_since(start);
  const std::string count = std::to_string(instances) + " instances";
  return {
      {"oracle", "marginals_vs_brute_force", worst_marginal <= 1e-10, worst_marginal, 1e-10,
       count + ", max induced width " + std::to_string(max_width), elapsed},
      {"oracle", "log_partition_vs_brute_force", worst_log_z <= 1e-8, worst_log_z, 1e-8, count,
       elapsed},
      {"oracle", "marginal_normalization", worst_norm <= 1e-12, worst_norm, 1e-12, count, elapsed},
      {"oracle", "offset_invariance", worst_offset <= 1e-10, worst_offset, 1e-10, count, elapsed},
  };
}

std::vector<CheckResult> montecarlo_suite(int samples, std::uint64_t seed) {
  std::vector<CheckResult> results;
  const ControlParams params = reference_params();
  const double t = 0.0;
  const double T = params.horizon();
  const TargetSet target = TargetSet::on_line({1.0});
  const std::vector<double> unit_weight{0.0};
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(1, 0.3);
  mc::DiffusionSpec spec;
  spec.nu = params.noise();
  spec.lambda = params.temperature();
  spec.dt = (T - t) / 1000.0;
  const mc::EndKernel kernel = mc::EndKernel::quadratic(params.end_stiffness(), params.temperature());

  {
    const auto start = Clock::now();
    const auto draws = mc::sample_endpoints(x, t, spec, T, samples, seed);
    const mc::LogZEstimate est = mc::estimate_log_z(draws, kernel, target, unit_weight);
    const double exact = gaussian::log_z_single(x, t, target.position(0), params) +
                         mc::quadratic_kernel_log_offset(t, params, 1);
    const double z = std::abs(est.log_z - exact) / est.standard_error;
    std::ostringstream detail;
    detail << "estimate " << est.log_z << " +- " << est.standard_error << ", closed form " << exact
           << ", N = " << est.samples;
    results.push_back({"montecarlo", "log_z_vs_closed_form", z <= 3.0, z, 3.0, detail.str(),
                       seconds_since(start)});
  }
  {
    const auto start = Clock::now();
    constexpr double rate = 3.0;
    mc::DiffusionSpec killed = spec;
    killed.potential = [](const Eigen::VectorXd&, double) { return rate; };
    const auto draws = mc::sample_endpoints(x, t, killed, T, samples, seed + 1);
    const double survivors = static_cast<double>(
        std::count_if(draws.begin(), draws.end(), [](const auto& d) { return !d.killed; }));
    const double fraction = survivors / samples;
    const double expected = std::exp(-rate * (T - t) / params.temperature());
    const double se = std::sqrt(expected * (1.0 - expected) / samples);
    const double z = std::abs(fraction - expected) / se;
    std::ostringstream detail;
    detail << "survival " << fraction << ", expected " << expected << ", SE " << se;
    results.push_back({"montecarlo", "constant_killing_survival", z <= 4.0, z, 4.0, detail.str(),
                       seconds_since(start)});
  }
  {
    const auto start = Clock::now();
    const mc::ControlEstimate est =
        mc::mc_control(x, t, spec, T, kernel, target, unit_weight, 1e-2, samples, seed + 2);
    const double exact = gaussian::control_single(x, t, target.position(0), params)[0];
    const double z = std::abs(est.u[0] - exact) / est.standard_error[0];
    std::ostringstream detail;
    detail << "control " << est.u[0] << " +- " << est.standard_error[0] << ", closed form "
           << exact;
    results.push_back({"montecarlo", "control_vs_closed_form", z <= 3.0, z, 3.0, detail.str(),
                       seconds_since(start)});
  }
  {
    // A softer end cost keeps the finite-difference estimate sharp.
    const auto start = Clock::now();
    const ControlParams soft(params.noise(), params.control_weight(), 10.0, params.step_fraction(),
                             params.horizon());
    const mc::ControlEstimate est = mc::mc_control(
        x, t, spec, T, mc::EndKernel::quadratic(soft.end_stiffness(), soft.temperature()), target,
        unit_weight, 1e-2, samples, seed + 3);
    const double exact = gaussian::control_single(x, t, target.position(0), soft)[0];
    const double z = std::abs(est.u[0] - exact) / est.standard_error[0];
    std::ostringstream detail;
    detail << "control " << est.u[0] << " +- " << est.standard_error[0] << ", closed form "
           << exact << ", alpha = " << soft.end_stiffness();
    results.push_back({"montecarlo", "control_vs_closed_form_soft", z <= 3.0, z, 3.0,
                       detail.str(), seconds_since(start)});
  }
  return results;
}

std::vector<CheckResult> run_suite(const std::string& name) {
  if (name == "gradient") return gradient_suite();
  if (name == "oracle") return oracle_suite();
  if (name == "montecarlo") return montecarlo_suite();
  if (name == "all") {
    std::vector<CheckResult> all = gradient_suite();
    for (auto&& r : oracle_suite()) all.push_back(std::move(r));
    for (auto&& r : montecarlo_suite()) all.push_back(std::move(r));
    return all;
  }
  throw ValidationError("unknown validation suite '" + name +
                        "'; expected gradient, oracle, montecarlo or all");
}

std::string to_json(const std::vector<CheckResult>& results) {
  nlohmann::json doc;
  doc["passed"] = std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
  doc["checks"] = nlohmann::json::array();
  for (const CheckResult& r : results) {
    doc["checks"].push_back({{"suite", r.suite},
                             {"name", r.name},
                             {"passed", r.passed},
                             {"measured", r.measured},
                             {"tolerance", r.tolerance},
                             {"detail", r.detail},
                             {"seconds", r.seconds}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace pimas::validation
