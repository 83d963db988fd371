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

#include "pimas/scenario.hpp"

#include <string>

#include "pimas/errors.hpp"

namespace pimas {

Eigen::VectorXd DriftSpec::operator()(const Eigen::Ref<const Eigen::VectorXd>& x,
                                      double /*t*/) const {
  Eigen::VectorXd b = gain * x;
  if (offset.size() != 0) b += offset;
  return b;
}

double PotentialSpec::operator()(const Eigen::Ref<const Eigen::VectorXd>& x, double /*t*/) const {
  if (curvature == 0.0) return level;
  const double dist2 = center.size() == 0 ? x.squaredNorm() : (x - center).squaredNorm();
  return level + 0.5 * curvature * dist2;
}

void Scenario::validate() const {
  if (targets.dim() != initial.dim()) {
    throw ValidationError("targets are " + std::to_string(targets.dim()) +
                          "-dimensional but agents are " + std::to_string(initial.dim()) +
                          "-dimensional");
  }
  if (end_cost.num_labels != targets.size()) {
    throw ValidationError("end cost is defined over " + std::to_string(end_cost.num_labels) +
                          " labels but there are " + std::to_string(targets.size()) + " targets");
  }
  end_cost.validate(num_agents());
  if (initial.time() > params.horizon()) {
    throw ValidationError("initial time exceeds horizon T");
  }
  if (drift.offset.size() != 0 && drift.offset.size() != dim()) {
    throw ValidationError("drift offset dimension does not match agents");
  }
  if (!std::isfinite(drift.gain) || !drift.offset.allFinite()) {
    throw ValidationError("drift is not finite");
  }
  if (potential.center.size() != 0 && potential.center.size() != dim()) {
    throw ValidationError("potential center dimension does not match agents");
  }
  if (!(potential.level >= 0.0) || !(potential.curvature >= 0.0) ||
      !std::isfinite(potential.level) || !std::isfinite(potential.curvature)) {
    throw ValidationError("potential level and curvature must be finite and >= 0");
  }
  if (relations) {
    relations->validate();
    if (relations->num_nodes != num_agents()) {
      throw ValidationError("relation graph size does not match the number of agents");
    }
  }
}

}  // namespace pimas
