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

#include "pimas/gaussian.hpp"

#include <cmath>
#include <string>
#include <vector>

#include "pimas/errors.hpp"
#include "pimas/numerics.hpp"

namespace pimas::gaussian {
namespace {

void check_dims(const Point& x, const Point& mu) {
  if (x.size() != mu.size()) {
    throw ValidationError("position has dimension " + std::to_string(x.size()) +
                          " but target has dimension " + std::to_string(mu.size()));
  }
}

void check_targets(const Point& x, const TargetSet& targets, std::span<const double> log_weights) {
  if (x.size() != targets.dim()) {
    throw ValidationError("position dimension does not match targets");
  }
  if (static_cast<int>(log_weights.size()) != targets.size()) {
    throw ValidationError("expected one log weight per target");
  }
}

std::vector<double> weighted_log_terms(const Point& x, double t, const TargetSet& targets,
                                       std::span<const double> log_weights,
                                       const ControlParams& params) {
  check_targets(x, targets, log_weights);
  const double variance = effective_variance(t, params);
  std::vector<double> terms(targets.size());
  for (int s = 0; s < targets.size(); ++s) {
    const double dist2 = (x - targets.positions().row(s).transpose()).squaredNorm();
    terms[s] = log_weights[s] - dist2 / (2.0 * variance);
  }
  return terms;
}

}  // namespace

double effective_variance(double t, const ControlParams& params) {
  if (t > params.horizon()) {
    throw DomainError("time " + std::to_string(t) + " is past the horizon T = " +
                      std::to_string(params.horizon()));
  }
  return params.noise() * (params.horizon() - t + params.end_time_offset());
}

double log_z_single(const Point& x, double t, const Point& mu, const ControlParams& params) {
  check_dims(x, mu);
  return -(x - mu).squaredNorm() / (2.0 * effective_variance(t, params));
}

Eigen::VectorXd control_single(const Point& x, double t, const Point& mu,
                               const ControlParams& params) {
  check_dims(x, mu);
  return (mu - x) / (params.horizon() - t + params.end_time_offset());
}

Eigen::VectorXd mixture_posterior(const Point& x, double t, const TargetSet& targets,
                                  std::span<const double> log_weights,
                                  const ControlParams& params) {
  const std::vector<double> terms = weighted_log_terms(x, t, targets, log_weights, params);
  const double log_norm = log_sum_exp(terms);
  if (log_norm == kNegInf) throw DegeneratePosteriorError("all target weights are zero");
  Eigen::VectorXd p(targets.size());
  for (int s = 0; s < targets.size(); ++s) p[s] = std::exp(terms[s] - log_norm);
  return p;
}

Eigen::VectorXd mixture_control(const Point& x, double t, const TargetSet& targets,
                                std::span<const double> log_weights, const ControlParams& params) {
  const Eigen::VectorXd p = mixture_posterior(x, t, targets, log_weights, params);
  const Eigen::VectorXd mubar = targets.positions().transpose() * p;
  return (mubar - x) / (params.horizon() - t + params.end_time_offset());
}

double log_partition(const Point& x, double t, const TargetSet& targets,
                     std::span<const double> log_weights, const ControlParams& params) {
  const double value = log_sum_exp(weighted_log_terms(x, t, targets, log_weights, params));
  if (value == kNegInf) throw DegeneratePosteriorError("all target weights are zero");
  return value;
}

double cost_to_go(const Point& x, double t, const TargetSet& targets,
                  std::span<const double> log_weights, const ControlParams& params) {
  return -params.temperature() * log_partition(x, t, targets, log_weights, params);
}

}  // namespace pimas::gaussian
