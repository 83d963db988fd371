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

#include <Eigen/Dense>

namespace pimas {

/// Time plus one k-dimensional position per agent (row a holds agent a).
class JointState {
 public:
  /// Requires n >= 1, k >= 1, t >= 0 and finite entries.
  JointState(double t, Eigen::MatrixXd positions);

  double time() const { return t_; }
  const Eigen::MatrixXd& positions() const { return x_; }
  int num_agents() const { return static_cast<int>(x_.rows()); }
  int dim() const { return static_cast<int>(x_.cols()); }

  bool operator==(const JointState& other) const {
    return t_ == other.t_ && x_.rows() == other.x_.rows() && x_.cols() == other.x_.cols() &&
           x_ == other.x_;
  }

 private:
  double t_;
  Eigen::MatrixXd x_;
};

/// m target positions in k dimensions (row s holds target s).
class TargetSet {
 public:
  explicit TargetSet(Eigen::MatrixXd positions);

  /// Convenience for 1-d targets.
  static TargetSet on_line(std::initializer_list<double> coords);

  const Eigen::MatrixXd& positions() const { return mu_; }
  auto position(int s) const { return mu_.row(s).transpose(); }
  int size() const { return static_cast<int>(mu_.rows()); }
  int dim() const { return static_cast<int>(mu_.cols()); }

  bool operator==(const TargetSet& other) const {
    return mu_.rows() == other.mu_.rows() && mu_.cols() == other.mu_.cols() && mu_ == other.mu_;
  }

 private:
  Eigen::MatrixXd mu_;
};

}  // namespace pimas
