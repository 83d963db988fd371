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

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "pimas/endcost.hpp"
#include "pimas/params.hpp"
#include "pimas/state.hpp"

namespace pimas {

/// Per-agent drift b(x, t) = offset + gain * x. Zero by default.
struct DriftSpec {
  double gain = 0.0;
  Eigen::VectorXd offset;  // empty means zero

  bool is_zero() const { return gain == 0.0 && (offset.size() == 0 || offset.isZero(0.0)); }
  Eigen::VectorXd operator()(const Eigen::Ref<const Eigen::VectorXd>& x, double t) const;

  bool operator==(const DriftSpec& o) const {
    return gain == o.gain && offset.size() == o.offset.size() && offset == o.offset;
  }
};

/// Per-agent state cost V(x, t) = level + curvature/2 * |x - center|^2. Zero by
/// default; must stay non-negative.
struct PotentialSpec {
  double level = 0.0;
  double curvature = 0.0;
  Eigen::VectorXd center;  // empty means origin

  bool is_zero() const { return level == 0.0 && curvature == 0.0; }
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& x, double t) const;

  bool operator==(const PotentialSpec& o) const {
    return level == o.level && curvature == o.curvature && center.size() == o.center.size() &&
           center == o.center;
  }
};

struct Scenario {
  std::string name;
  TargetSet targets;
  FactoredEndCost end_cost;
  ControlParams params;
  JointState initial;
  DriftSpec drift;
  PotentialSpec potential;
  /// Relations the end cost was built from, kept for outcome statistics.
  std::optional<RelationGraph> relations;

  int num_agents() const { return initial.num_agents(); }
  int num_targets() const { return targets.size(); }
  int dim() const { return initial.dim(); }

  /// Dimension agreement, factor scopes, label count, t0 <= T, and the
  /// drift/potential shapes. Throws ValidationError.
  void validate() const;

  bool operator==(const Scenario&) const = default;
};

}  // namespace pimas
