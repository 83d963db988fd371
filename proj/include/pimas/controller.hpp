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
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "pimas/errors.hpp"
#include "pimas/inference.hpp"
#include "pimas/rng.hpp"
#include "pimas/scenario.hpp"

namespace pimas {

/// Optimal joint control at one state.
struct ControlOutput {
  Eigen::MatrixXd u;          // n x k
  Eigen::MatrixXd mubar;      // n x k expected targets
  Eigen::MatrixXd marginals;  // n x m
  double log_partition = 0.0;
};

/// Closed-form multi-agent controller for the Gaussian model.
///
/// Each agent steers toward its posterior-mean target,
///   u_a = (mubar_a - x_a) / (T - t + R/alpha),
/// where the posterior over assignments couples the agents through the
/// factored end cost. The clique tree is built once per scenario.
class JointController {
 public:
  explicit JointController(const Scenario& scenario, double max_clique_entries = 1e8);

  ControlOutput control(const JointState& state) const;

  /// log Z(x, t) of the joint problem (same additive convention as
  /// gaussian::log_z_single).
  double log_partition(const Eigen::MatrixXd& positions, double t) const;

  UnaryLogZTable unary_tables(const Eigen::MatrixXd& positions, double t) const;

  const EliminationOrder& order() const { return order_; }
  int induced_width() const { return tree_.width(); }

 private:
  ControlParams params_;
  TargetSet targets_;
  EliminationOrder order_;
  JunctionTree tree_;
};

ControlOutput joint_control(const JointState& state, const Scenario& scenario);

/// nu times the central finite difference of log Z in every coordinate of
/// every agent. Result is n x k.
Eigen::MatrixXd numeric_control_check(const JointState& state, const Scenario& scenario, double h);

/// epsilon (T - t + R/alpha): keeps u dt = epsilon (mubar - x).
double adaptive_dt(double t, const ControlParams& params);

struct TrajectoryRecord {
  double t = 0.0;
  Eigen::MatrixXd x;
  Eigen::MatrixXd u;
  Eigen::MatrixXd mubar;
  Eigen::MatrixXd marginals;
};

struct Trajectory {
  std::uint64_t seed = 0;
  ControlParams params;
  std::vector<TrajectoryRecord> records;
  double end_time = 0.0;
};

/// Source of standard normal increments for simulate().
class NoiseSource {
 public:
  virtual ~NoiseSource() = default;
  virtual double next() = 0;
};

class SeededNoise : public NoiseSource {
 public:
  explicit SeededNoise(std::uint64_t seed) : rng_(seed) {}
  double next() override { return rng_.normal(); }

 private:
  Rng rng_;
};

/// Thrown when the controller fails mid-run; carries what was simulated so far.
class SimulationError : public Error {
 public:
  SimulationError(const std::string& what, Trajectory partial)
      : Error(what), partial_(std::move(partial)) {}
  const Trajectory& partial() const { return partial_; }

 private:
  Trajectory partial_;
};

/// Euler-Maruyama run of the controlled system from the scenario's initial
/// state to T with adaptive steps; the last step is shortened to land on T.
/// One record per visited time, including t = T.
Trajectory simulate(const Scenario& scenario, std::uint64_t seed);
Trajectory simulate(const Scenario& scenario, NoiseSource& noise, std::uint64_t seed = 0);
Trajectory simulate(const Scenario& scenario, const JointController& controller,
                    NoiseSource& noise, std::uint64_t seed);

}  // namespace pimas
