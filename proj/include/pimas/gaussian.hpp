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

#include <span>

#include <Eigen/Dense>

#include "pimas/params.hpp"
#include "pimas/state.hpp"

// Closed-form quantities for zero drift, zero potential and quadratic end
// costs alpha/2 |x - mu|^2. Log partition functions use the convention
// log Z(x = mu) = 0.
namespace pimas::gaussian {

using Point = Eigen::Ref<const Eigen::VectorXd>;

/// nu (T - t + R/alpha). Throws DomainError for t > T.
double effective_variance(double t, const ControlParams& params);

/// -|x - mu|^2 / (2 nu (T - t + R/alpha)).
double log_z_single(const Point& x, double t, const Point& mu, const ControlParams& params);

/// (mu - x) / (T - t + R/alpha), the linear-quadratic regulator toward mu.
Eigen::VectorXd control_single(const Point& x, double t, const Point& mu,
                               const ControlParams& params);

/// p(s | x, t) proportional to w(s) Z(x, t; s), computed in the log domain.
/// Throws DegeneratePosteriorError when every log weight is -inf.
Eigen::VectorXd mixture_posterior(const Point& x, double t, const TargetSet& targets,
                                  std::span<const double> log_weights,
                                  const ControlParams& params);

/// (mubar - x) / (T - t + R/alpha) with mubar the posterior-mean target.
Eigen::VectorXd mixture_control(const Point& x, double t, const TargetSet& targets,
                                std::span<const double> log_weights, const ControlParams& params);

/// log sum_s w(s) Z(x, t; s).
double log_partition(const Point& x, double t, const TargetSet& targets,
                     std::span<const double> log_weights, const ControlParams& params);

/// J = -lambda log Z.
double cost_to_go(const Point& x, double t, const TargetSet& targets,
                  std::span<const double> log_weights, const ControlParams& params);

}  // namespace pimas::gaussian
