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

#include "pimas/params.hpp"

#include <cmath>
#include <string>

#include "pimas/errors.hpp"

namespace pimas {
namespace {

void require_positive(double value, const char* field) {
  if (!std::isfinite(value) || !(value > 0.0)) {
    throw ValidationError(std::string("parameter '") + field +
                          "' must be finite and > 0, got " + std::to_string(value));
  }
}

double require_present(const std::optional<double>& value, const char* field) {
  if (!value) throw ValidationError(std::string("parameter '") + field + "' is missing");
  return *value;
}

}  // namespace

ControlParams::ControlParams(double nu, double R, double alpha, double epsilon, double T)
    : nu_(nu), R_(R), lambda_(nu * R), alpha_(alpha), epsilon_(epsilon), T_(T) {
  require_positive(nu, "nu");
  require_positive(R, "R");
  require_positive(alpha, "alpha");
  require_positive(epsilon, "epsilon");
  require_positive(T, "T");
  if (!(epsilon < 1.0)) {
    throw ValidationError("parameter 'epsilon' must be < 1, got " + std::to_string(epsilon));
  }
}

RawParams ControlParams::raw() const {
  return RawParams{nu_, R_, lambda_, alpha_, epsilon_, T_};
}

ControlParams validate_params(const RawParams& candidate) {
  ControlParams params(require_present(candidate.nu, "nu"), require_present(candidate.R, "R"),
                       require_present(candidate.alpha, "alpha"),
                       require_present(candidate.epsilon, "epsilon"),
                       require_present(candidate.T, "T"));
  if (candidate.lambda) {
    const double expected = params.temperature();
    const double given = *candidate.lambda;
    if (!std::isfinite(given) || std::abs(given - expected) > 1e-12 * std::abs(expected)) {
      throw CouplingError("lambda = " + std::to_string(given) + " violates lambda = nu * R = " +
                          std::to_string(expected));
    }
  }
  return params;
}

ControlParams reference_params() { return ControlParams(1.0, 1.0, 1e3, 0.01, 1.0); }

}  // namespace pimas
