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

#include "pimas/controller.hpp"

#include <cmath>
#include <string>

#include "pimas/gaussian.hpp"

namespace pimas {

JointController::JointController(const Scenario& scenario, double max_clique_entries)
    : params_(scenario.params),
      targets_(scenario.targets),
      order_(min_degree_order(scenario.end_cost.scopes(), scenario.num_agents())),
      tree_(scenario.end_cost, scenario.num_agents(), order_, max_clique_entries) {
  scenario.validate();
}

UnaryLogZTable JointController::unary_tables(const Eigen::MatrixXd& positions, double t) const {
  if (positions.rows() != tree_.num_agents() || positions.cols() != targets_.dim()) {
    throw ValidationError("joint state shape does not match the scenario");
  }
  const double two_variance = 2.0 * gaussian::effective_variance(t, params_);
  UnaryLogZTable tables(positions.rows(), targets_.size());
  for (Eigen::Index a = 0; a < positions.rows(); ++a) {
    for (int s = 0; s < targets_.size(); ++s) {
      tables(a, s) = -(positions.row(a) - targets_.positions().row(s)).squaredNorm() / two_variance;
    }
  }
  return tables;
}

double JointController::log_partition(const Eigen::MatrixXd& positions, double t) const {
  return tree_.run(unary_tables(positions, t), params_.temperature()).log_partition;
}

ControlOutput JointController::control(const JointState& state) const {
  const double t = state.time();
  const InferenceResult posterior =
      tree_.run(unary_tables(state.positions(), t), params_.temperature());
  ControlOutput out;
  out.marginals = posterior.marginals;
  out.log_partition = posterior.log_partition;
  out.mubar = posterior.marginals * targets_.positions();
  out.u = (out.mubar - state.positions()) / (params_.horizon() - t + params_.end_time_offset());
  return out;
}

ControlOutput joint_control(const JointState& state, const Scenario& scenario) {
  return JointController(scenario).control(state);
}

Eigen::MatrixXd numeric_control_check(const JointState& state, const Scenario& scenario, double h) {
  if (!(h > 0.0)) throw ValidationError("finite-difference step must be > 0");
  const JointController controller(scenario);
  const Eigen::MatrixXd& x = state.positions();
  Eigen::MatrixXd grad(x.rows(), x.cols());
  Eigen::MatrixXd shifted = x;
  for (Eigen::Index a = 0; a < x.rows(); ++a) {
    for (Eigen::Index d = 0; d < x.cols(); ++d) {
      shifted(a, d) = x(a, d) + h;
      const double plus = controller.log_partition(shifted, state.time());
      shifted(a, d) = x(a, d) - h;
      const double minus = controller.log_partition(shifted, state.time());
      shifted(a, d) = x(a, d);
      grad(a, d) = scenario.params.noise() * (plus - minus) / (2.0 * h);
    }
  }
  return grad;
}

double adaptive_dt(double t, const ControlParams& params) {
  if (t > params.horizon()) throw DomainError("time is past the horizon T");
  return params.step_fraction() * (params.horizon() - t + params.end_time_offset());
}

Trajectory simulate(const Scenario& scenario, std::uint64_t seed) {
  SeededNoise noise(seed);
  return simulate(scenario, noise, seed);
}

Trajectory simulate(const Scenario& scenario, NoiseSource& noise, std::uint64_t seed) {
  const JointController controller(scenario);
  return simulate(scenario, controller, noise, seed);
}

Trajectory simulate(const Scenario& scenario, const JointController& controller,
                    NoiseSource& noise, std::uint64_t seed) {
  const ControlParams& params = scenario.params;
  const double horizon = params.horizon();
  const double sqrt_nu = std::sqrt(params.noise());
  const bool has_drift = !scenario.drift.is_zero();

  Trajectory trajectory{seed, params, {}, scenario.initial.time()};
  double t = scenario.initial.time();
  Eigen::MatrixXd x = scenario.initial.positions();

  for (;;) {
    ControlOutput control;
    try {
      control = controller.control(JointState(t, x));
    } catch (const Error& e) {
      trajectory.end_time = t;
      throw SimulationError("control failed at t = " + std::to_string(t) + ": " + e.what(),
                            std::move(trajectory));
    }
    trajectory.records.push_back({t, x, control.u, control.mubar, control.marginals});
    trajectory.end_time = t;
    if (t >= horizon) break;

    double dt = adaptive_dt(t, params);
    double next_t = t + dt;
    if (next_t >= horizon) {
      dt = horizon - t;
      next_t = horizon;
    }
    const double noise_scale = sqrt_nu * std::sqrt(dt);
    for (Eigen::Index a = 0; a < x.rows(); ++a) {
      Eigen::VectorXd velocity = control.u.row(a).transpose();
      if (has_drift) velocity += scenario.drift(x.row(a).transpose(), t);
      for (Eigen::Index d = 0; d < x.cols(); ++d) {
        x(a, d) += velocity[d] * dt + noise_scale * noise.next();
      }
    }
    t = next_t;
  }
  return trajectory;
}

}  // namespace pimas
