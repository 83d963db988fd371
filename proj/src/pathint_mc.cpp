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

#include "pimas/pathint_mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "pimas/errors.hpp"
#include "pimas/numerics.hpp"
#include "pimas/rng.hpp"

namespace pimas::mc {
namespace {

constexpr double kMaxKillProbability = 0.5;

EndpointSample sample_path(const Eigen::VectorXd& x, double t, const DiffusionSpec& spec,
                           double T, Rng rng) {
  EndpointSample out{x, false};
  Eigen::VectorXd& y = out.y;
  double time = t;
  while (time < T) {
    const double dt = std::min(spec.dt, T - time);
    if (spec.potential) {
      const double rate = spec.potential(y, time) * dt / spec.lambda;
      if (rate > kMaxKillProbability || rate < 0.0 || !std::isfinite(rate)) {
        throw StepSizeError("kill probability V dt / lambda = " + std::to_string(rate) +
                            " at t = " + std::to_string(time) +
                            " is outside [0, 0.5]; use a smaller Monte-Carlo dt");
      }
      if (rng.uniform() < -std::expm1(-rate)) {
        out.killed = true;
        return out;
      }
    }
    if (spec.drift) y += spec.drift(y, time) * dt;
    const double scale = std::sqrt(spec.nu * dt);
    for (Eigen::Index d = 0; d < y.size(); ++d) y[d] += scale * rng.normal();
    time = time + dt >= T ? T : time + dt;
  }
  return out;
}

std::vector<double> log_masses(std::span<const EndpointSample> samples, const EndKernel& kernel,
                               const TargetSet& targets, std::span<const double> log_weights) {
  if (static_cast<int>(log_weights.size()) != targets.size()) {
    throw ValidationError("expected one log weight per target");
  }
  std::vector<double> out(samples.size(), kNegInf);
  std::vector<double> terms(targets.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].killed) continue;
    for (int s = 0; s < targets.size(); ++s) {
      terms[s] = log_weights[s] +
                 kernel.log_value(samples[i].y, targets.positions().row(s).transpose());
    }
    out[i] = log_sum_exp(terms);
  }
  return out;
}

}  // namespace

std::vector<EndpointSample> sample_endpoints(const Eigen::VectorXd& x, double t,
                                             const DiffusionSpec& spec, double T, int N,
                                             std::uint64_t seed) {
  if (N < 1) throw ValidationError("sample count must be >= 1");
  if (!(spec.dt > 0.0)) throw ValidationError("Monte-Carlo dt must be > 0");
  if (!(spec.nu > 0.0) || !(spec.lambda > 0.0)) throw ValidationError("nu and lambda must be > 0");
  if (t > T) throw DomainError("start time is past the horizon");

  std::vector<EndpointSample> samples(static_cast<std::size_t>(N));
  const int workers = std::clamp(spec.threads, 1, N);
  std::vector<std::exception_ptr> failures(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int i = w; i < N; i += workers) {
            samples[i] = sample_path(x, t, spec, T, Rng::substream(seed, static_cast<std::uint64_t>(i)));
          }
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }
  return samples;
}

EndKernel EndKernel::quadratic(double alpha, double lambda) {
  if (!(alpha > 0.0) || !(lambda > 0.0)) throw ValidationError("kernel alpha, lambda must be > 0");
  EndKernel k;
  k.kind = Kind::kQuadratic;
  k.alpha = alpha;
  k.lambda = lambda;
  return k;
}

EndKernel EndKernel::narrow_gaussian(double sigma) {
  if (!(sigma > 0.0)) throw ValidationError("kernel width sigma must be > 0");
  EndKernel k;
  k.kind = Kind::kNarrowGaussian;
  k.sigma = sigma;
  return k;
}

double EndKernel::log_value(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) const {
  const double dist2 = (y - mu).squaredNorm();
  if (kind == Kind::kQuadratic) return -alpha * dist2 / (2.0 * lambda);
  const double k = static_cast<double>(y.size());
  return -0.5 * k * std::log(2.0 * std::numbers::pi * sigma * sigma) -
         dist2 / (2.0 * sigma * sigma);
}

LogZEstimate estimate_log_z(std::span<const EndpointSample> samples, const EndKernel& kernel,
                            const TargetSet& targets, std::span<const double> log_weights) {
  const std::vector<double> logs = log_masses(samples, kernel, targets, log_weights);
  const double n = static_cast<double>(samples.size());
  const double log_mean = log_sum_exp(logs) - std::log(n);
  if (!std::isfinite(log_mean)) {
    throw EstimationError("no Monte-Carlo sample carries end-cost mass");
  }
  LogZEstimate est;
  est.log_z = log_mean;
  est.samples = static_cast<int>(samples.size());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i) {
    if (!samples[i].killed) ++est.survivors;
    const double r = logs[i] == kNegInf ? 0.0 : std::exp(logs[i] - log_mean);
    sum_sq += (r - 1.0) * (r - 1.0);
  }
  est.standard_error = samples.size() > 1 ? std::sqrt(sum_sq / (n - 1.0) / n) : 0.0;
  return est;
}

ControlEstimate mc_control(const Eigen::VectorXd& x, double t, const DiffusionSpec& spec, double T,
                           const EndKernel& kernel, const TargetSet& targets,
                           std::span<const double> log_weights, double h, int N,
                           std::uint64_t seed) {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be > 0");
  const Eigen::Index k = x.size();
  ControlEstimate out{Eigen::VectorXd(k), Eigen::VectorXd(k)};
  for (Eigen::Index d = 0; d < k; ++d) {
    Eigen::VectorXd plus = x;
    Eigen::VectorXd minus = x;
    plus[d] += h;
    minus[d] -= h;
    const auto up = sample_endpoints(plus, t, spec, T, N, seed);
    const auto down = sample_endpoints(minus, t, spec, T, N, seed);
    const std::vector<double> log_up = log_masses(up, kernel, targets, log_weights);
    const std::vector<double> log_down = log_masses(down, kernel, targets, log_weights);
    const double n = static_cast<double>(N);
    const double mean_up = log_sum_exp(log_up) - std::log(n);
    const double mean_down = log_sum_exp(log_down) - std::log(n);
    if (!std::isfinite(mean_up) || !std::isfinite(mean_down)) {
      throw EstimationError("no Monte-Carlo sample carries end-cost mass");
    }
    // Delta method on log(mean+) - log(mean-) with paired samples.
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < N; ++i) {
      const double r_up = log_up[i] == kNegInf ? 0.0 : std::exp(log_up[i] - mean_up);
      const double r_down = log_down[i] == kNegInf ? 0.0 : std::exp(log_down[i] - mean_down);
      sum += r_up - r_down;
      sum_sq += (r_up - r_down) * (r_up - r_down);
    }
    const double mean = sum / n;
    const double variance = N > 1 ? (sum_sq - n * mean * mean) / (n - 1.0) : 0.0;
    out.u[d] = spec.nu * (mean_up - mean_down) / (2.0 * h);
    out.standard_error[d] = spec.nu * std::sqrt(std::max(variance, 0.0) / n) / (2.0 * h);
  }
  return out;
}

double quadratic_kernel_log_offset(double t, const ControlParams& params, int dim) {
  const double offset = params.end_time_offset();
  return 0.5 * dim * std::log(offset / (params.horizon() - t + offset));
}

}  // namespace pimas::mc
