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

#include <string>

#include "doctest.h"
#include "pimas/errors.hpp"
#include "pimas/params.hpp"

using namespace pimas;

namespace {

RawParams raw(double nu, double R, double alpha = 1e3, double epsilon = 0.01, double T = 1.0) {
  RawParams p;
  p.nu = nu;
  p.R = R;
  p.alpha = alpha;
  p.epsilon = epsilon;
  p.T = T;
  return p;
}

}  // namespace

TEST_CASE("validate_params derives lambda = nu * R") {
  CHECK(validate_params(raw(1.0, 1.0)).temperature() == 1.0);
  CHECK(validate_params(raw(2.0, 0.5)).temperature() == 1.0);
  CHECK(validate_params(raw(0.3, 7.0)).temperature() == doctest::Approx(2.1).epsilon(1e-15));
}

TEST_CASE("explicit lambda must satisfy the coupling constraint") {
  RawParams p = raw(1.0, 1.0);
  p.lambda = 2.0;
  CHECK_THROWS_AS(validate_params(p), CouplingError);
  p.lambda = 1.0 + 1e-13;
  CHECK(validate_params(p).temperature() == 1.0);
  p.lambda = 1.0 + 1e-10;
  CHECK_THROWS_AS(validate_params(p), CouplingError);
}

TEST_CASE("non-positive fields are rejected by name") {
  auto message_for = [](const RawParams& p) {
    try {
      validate_params(p);
    } catch (const ValidationError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(message_for(raw(0.0, 1.0)).find("'nu'") != std::string::npos);
  CHECK(message_for(raw(1.0, -1.0)).find("'R'") != std::string::npos);
  CHECK(message_for(raw(1.0, 1.0, 0.0)).find("'alpha'") != std::string::npos);
  CHECK(message_for(raw(1.0, 1.0, 1e3, 0.0)).find("'epsilon'") != std::string::npos);
  CHECK(message_for(raw(1.0, 1.0, 1e3, 1.0)).find("'epsilon'") != std::string::npos);
  CHECK(message_for(raw(1.0, 1.0, 1e3, 0.01, -2.0)).find("'T'") != std::string::npos);

  RawParams missing = raw(1.0, 1.0);
  missing.alpha.reset();
  CHECK(message_for(missing).find("'alpha' is missing") != std::string::npos);
}

TEST_CASE("validate_params is idempotent") {
  const ControlParams once = validate_params(raw(1.7, 0.4, 250.0, 0.02, 3.0));
  const ControlParams twice = validate_params(once.raw());
  CHECK(once == twice);
  CHECK(reference_params() == validate_params(raw(1.0, 1.0)));
}
