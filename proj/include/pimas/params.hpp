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

namespace pimas {

/// Unvalidated parameter record as read from a file or command line.
struct RawParams {
  std::optional<double> nu;
  std::optional<double> R;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> epsilon;
  std::optional<double> T;
};

/// Scalar model constants shared by every agent and dimension.
///
/// The temperature is always nu * R: noise and control cost are coupled so
/// that the log transform of the cost-to-go is linear.
class ControlParams {
 public:
  /// Throws ValidationError naming the first non-positive field, or when
  /// epsilon >= 1.
  ControlParams(double nu, double R, double alpha, double epsilon, double T);

  double noise() const { return nu_; }
  double control_weight() const { return R_; }
  double temperature() const { return lambda_; }
  double end_stiffness() const { return alpha_; }
  double step_fraction() const { return epsilon_; }
  double horizon() const { return T_; }

  /// R / alpha: the extra "virtual time" contributed by a finite end cost.
  double end_time_offset() const { return R_ / alpha_; }

  RawParams raw() const;

  bool operator==(const ControlParams&) const = default;

 private:
  double nu_;
  double R_;
  double lambda_;
  double alpha_;
  double epsilon_;
  double T_;
};

/// Builds ControlParams from a raw record. An explicit lambda must agree with
/// nu * R to 1e-12 relative error or a CouplingError is thrown.
ControlParams validate_params(const RawParams& candidate);

/// nu = R = 1, alpha = 1e3, epsilon = 0.01, T = 1.
ControlParams reference_params();

}  // namespace pimas
