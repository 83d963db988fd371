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

#include "pimas/state.hpp"

#include <string>

#include "pimas/errors.hpp"

namespace pimas {

JointState::JointState(double t, Eigen::MatrixXd positions) : t_(t), x_(std::move(positions)) {
  if (x_.rows() < 1 || x_.cols() < 1) throw ValidationError("joint state needs n >= 1 and k >= 1");
  if (!std::isfinite(t_) || t_ < 0.0) {
    throw ValidationError("joint state time must be finite and >= 0, got " + std::to_string(t_));
  }
  if (!x_.allFinite()) throw ValidationError("joint state has non-finite positions");
}

TargetSet::TargetSet(Eigen::MatrixXd positions) : mu_(std::move(positions)) {
  if (mu_.rows() < 1 || mu_.cols() < 1) throw ValidationError("target set needs m >= 1 and k >= 1");
  if (!mu_.allFinite()) throw ValidationError("target set has non-finite positions");
}

TargetSet TargetSet::on_line(std::initializer_list<double> coords) {
  Eigen::MatrixXd mu(static_cast<Eigen::Index>(coords.size()), 1);
  Eigen::Index i = 0;
  for (double c : coords) mu(i++, 0) = c;
  return TargetSet(std::move(mu));
}

}  // namespace pimas
