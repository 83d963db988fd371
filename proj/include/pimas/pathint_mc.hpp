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
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pimas/params.hpp"
#include "pimas/state.hpp"

// Monte-Carlo estimates of the partition function for arbitrary drift and
// potential: sample the uncontrolled diffusion, kill paths at rate V/lambda,
// and average the end-cost weight over the surviving endpoints.
namespace pimas::mc {

using DriftFn = std::function<Eigen::VectorXd(const Eigen::VectorXd& x, double t)>;
using PotentialFn = std::function<double(const Eigen::VectorXd& x, double t)>;

struct DiffusionSpec {
  DriftFn drift;          // empty means zero
  PotentialFn potential;  // empty means zero
  double nu = 1.0;
  double lambda = 1.0;
  double dt = 1e-3;
  /// Worker threads used for sampling. Output does not depend on it.
  int threads = 1;
};

struct EndpointSample {
  Eigen::VectorXd y;
  bool killed = false;
};

/// N independent Euler-Maruyama paths of dx = b dt + dxi from (x, t) to T.
/// Sample i draws from its own substream of `seed`. A path is removed in a
/// step with probability 1 - exp(-V dt / lambda); V dt / lambda above 0.5
/// throws StepSizeError.
std::vector<EndpointSample> sample_endpoints(const Eigen::VectorXd& x, double t,
                                             const DiffusionSpec& spec, double T, int N,
                                             std::uint64_t seed);

/// End-cost kernel Phi(y; s) around each target.
struct EndKernel {
  enum class Kind { kQuadratic, kNarrowGaussian };
  Kind kind = Kind::kQuadratic;
  double alpha = 1e3;   // kQuadratic: exp(-alpha |y - mu|^2 / (2 lambda))
  double lambda = 1.0;
  double sigma = 0.01;  // kNarrowGaussian: normalized Gaussian density of width sigma

  static EndKernel quadratic(double alpha, double lambda);
  static EndKernel narrow_gaussian(double sigma);

  double log_value(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) const;
};

struct LogZEstimate {
  double log_z = 0.0;
  double standard_error = 0.0;  // of log_z, by the delta method
  int samples = 0;
  int survivors = 0;
};

/// log of the sample mean of sum_s w(s) Phi(y; s); killed paths count as 0.
/// Throws EstimationError when no sample carries mass.
LogZEstimate estimate_log_z(std::span<const EndpointSample> samples, const EndKernel& kernel,
                            const TargetSet& targets, std::span<const double> log_weights);

struct ControlEstimate {
  Eigen::VectorXd u;
  Eigen::VectorXd standard_error;
};

/// nu * central difference of the log Z estimate per coordinate, with the same
/// seed at x + h and x - h. The standard error accounts for the correlation.
ControlEstimate mc_control(const Eigen::VectorXd& x, double t, const DiffusionSpec& spec, double T,
                           const EndKernel& kernel, const TargetSet& targets,
                           std::span<const double> log_weights, double h, int N,
                           std::uint64_t seed);

/// log of the Gaussian-convolution constant that relates the quadratic
/// kernel's exact log Z to gaussian::log_z_single:
/// (k/2) log((R/alpha) / (T - t + R/alpha)).
double quadratic_kernel_log_offset(double t, const ControlParams& params, int dim);

}  // namespace pimas::mc
