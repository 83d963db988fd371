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
#include <string>
#include <vector>

namespace pimas::validation {

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  double measured = 0.0;   // worst error (or statistic) observed
  double tolerance = 0.0;  // threshold it was compared against
  std::string detail;
  double seconds = 0.0;
};

/// nu * finite difference of log Z against the analytic controls: single-agent
/// mixtures (1e-6 relative, 1e-9 absolute floor) and multi-agent joint
/// controls (1e-5 relative).
std::vector<CheckResult> gradient_suite(int instances = 1000, std::uint64_t seed = 1);

/// Variable elimination against brute-force enumeration on random instances
/// with n in 2..8, m in 2..3 (marginals 1e-10, log Z 1e-8), plus
/// normalization and offset invariance.
std::vector<CheckResult> oracle_suite(int instances = 200, std::uint64_t seed = 2);

/// Killed-diffusion sampler against closed forms at N samples: log Z within
/// 3 SE, constant-rate survival within 4 SE, control within 3 combined SE.
std::vector<CheckResult> montecarlo_suite(int samples = 100000, std::uint64_t seed = 3);

/// "gradient", "oracle", "montecarlo" or "all". Throws ValidationError for
/// anything else.
std::vector<CheckResult> run_suite(const std::string& name);

/// Machine-readable report.
std::string to_json(const std::vector<CheckResult>& results);

}  // namespace pimas::validation
