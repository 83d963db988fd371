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

#include <cmath>
#include <limits>
#include <vector>

#include "doctest.h"
#include "pimas/controller.hpp"
#include "pimas/gaussian.hpp"
#include "pimas/io.hpp"
#include "pimas/rng.hpp"

using namespace pimas;

namespace {

Scenario line_scenario(Eigen::MatrixXd start, std::initializer_list<double> targets,
                       FactoredEndCost cost, ControlParams params = reference_params(),
                       double t0 = 0.0) {
  return Scenario{"test", TargetSet::on_line(targets), std::move(cost), params,
                  JointState(t0, std::move(start)), {}, {}, {}};
}

Eigen::MatrixXd column(std::initializer_list<double> xs) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 1);
  Eigen::Index i = 0;
  for (double x : xs) m(i++, 0) = x;
  return m;
}

class NegatedNoise : public NoiseSource {
 public:
  explicit NegatedNoise(std::uint64_t seed) : inner_(seed) {}
  double next() override { return -inner_.next(); }

 private:
  SeededNoise inner_;
};

class PoisonedNoise : public NoiseSource {
 public:
  explicit PoisonedNoise(int after) : after_(after) {}
  double next() override {
    return count_++ < after_ ? 0.0 : std::numeric_limits<double>::quiet_NaN();
  }

 private:
  int after_;
  int count_ = 0;
};

}  // namespace

TEST_CASE("joint control at the symmetric start is zero") {
  const Scenario s = io::builtin_scenario("firemen-2x2");
  const ControlOutput out = joint_control(s.initial, s);
  CHECK(out.u.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(out.mubar.cwiseAbs().maxCoeff() < 1e-15);
  CHECK(out.marginals(0, 0) == doctest::Approx(0.5));
}

TEST_CASE("single agent joint control equals the mixture control") {
  FactoredEndCost cost{3, {{{0}, {0.5, 0.0, -0.4}}}, 0.0};
  const Scenario s = line_scenario(column({0.37}), {-1.0, 0.0, 1.2}, cost, reference_params(), 0.25);
  const std::vector<double> log_w{-0.5, 0.0, 0.4};  // -E / lambda
  const Eigen::VectorXd expected = gaussian::mixture_control(
      Eigen::VectorXd::Constant(1, 0.37), 0.25, s.targets, log_w, s.params);
  CHECK(joint_control(s.initial, s).u(0, 0) == doctest::Approx(expected[0]).epsilon(1e-13));
}

TEST_CASE("two-agent control matches four-term enumeration") {
  const Scenario s = line_scenario(column({-0.5, 0.5}), {-1.0, 1.0}, firemen_factors(2, 2, 1.0));
  const double var = 1.001;  // nu (T - t + R/alpha)
  const double mu[2] = {-1.0, 1.0};
  const double x[2] = {-0.5, 0.5};
  double weight[2][2];
  double total = 0.0;
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      const double energy = s1 == s2 ? 2.0 : 0.0;
      weight[s1][s2] = std::exp(-energy - (x[0] - mu[s1]) * (x[0] - mu[s1]) / (2 * var) -
                                (x[1] - mu[s2]) * (x[1] - mu[s2]) / (2 * var));
      total += weight[s1][s2];
    }
  }
  const double p1 = (weight[0][0] + weight[0][1]) / total;  // agent 1 -> target 1
  const double p2 = (weight[0][0] + weight[1][0]) / total;  // agent 2 -> target 1
  const ControlOutput out = joint_control(s.initial, s);
  CHECK(out.marginals(0, 0) == doctest::Approx(p1).epsilon(1e-13));
  CHECK(out.marginals(1, 0) == doctest::Approx(p2).epsilon(1e-13));
  const double mubar1 = p1 * -1.0 + (1 - p1) * 1.0;
  const double mubar2 = p2 * -1.0 + (1 - p2) * 1.0;
  CHECK(out.mubar(0, 0) == doctest::Approx(mubar1).epsilon(1e-12));
  CHECK(out.u(0, 0) == doctest::Approx((mubar1 + 0.5) / 1.001).epsilon(1e-12));
  CHECK(out.u(1, 0) == doctest::Approx((mubar2 - 0.5) / 1.001).epsilon(1e-12));
}

TEST_CASE("finite-difference joint control") {
  const Scenario sym = io::builtin_scenario("firemen-2x2");
  CHECK(numeric_control_check(sym.initial, sym, 1e-5).cwiseAbs().maxCoeff() < 1e-6);

  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::MatrixXd x(3, 1);
    for (int a = 0; a < 3; ++a) x(a, 0) = -1.5 + 3.0 * rng.uniform();
    const Scenario s = line_scenario(x, {-1.0, 0.0, 1.0}, firemen_factors(3, 3, 0.8),
                                     reference_params(), 0.8 * rng.uniform());
    const Eigen::MatrixXd fd = numeric_control_check(s.initial, s, 1e-5);
    const Eigen::MatrixXd u = joint_control(s.initial, s).u;
    CHECK((fd - u).norm() <= 1e-5 * u.norm());
  }

  const Scenario one = line_scenario(column({0.2}), {0.9}, FactoredEndCost{1, {}, 0.0});
  CHECK(numeric_control_check(one.initial, one, 1e-5)(0, 0) ==
        doctest::Approx(gaussian::control_single(Eigen::VectorXd::Constant(1, 0.2), 0.0,
                                                 Eigen::VectorXd::Constant(1, 0.9), one.params)[0])
            .epsilon(1e-7));
}

TEST_CASE("adaptive_dt") {
  const ControlParams p = reference_params();
  CHECK(adaptive_dt(0.0, p) == doctest::Approx(0.01001).epsilon(1e-13));
  CHECK(adaptive_dt(1.0, p) == doctest::Approx(1e-5).epsilon(1e-12));
  const ControlParams doubled(1.0, 1.0, 1e3, 0.02, 1.0);
  CHECK(adaptive_dt(0.3, doubled) == doctest::Approx(2.0 * adaptive_dt(0.3, p)).epsilon(1e-14));
}

TEST_CASE("simulate: step schedule, step identity and landing on T") {
  const Scenario s = io::builtin_scenario("firemen-2x2");
  const ControlParams& p = s.params;
  const Trajectory tr = simulate(s, 4);
  const std::size_t steps = tr.records.size() - 1;

  // (T - t_k + R/alpha) shrinks by (1 - eps) per step; the clamped final step
  // happens once it would overshoot, i.e. after ceil(log(1 + aT/R) / -log(1 - eps)) steps.
  const double ratio = std::log(1.0 + p.end_stiffness() * p.horizon() / p.control_weight());
  const double exact = std::ceil(ratio / -std::log1p(-p.step_fraction()));
  CHECK(std::abs(static_cast<double>(steps) - exact) <= 1.0);
  CHECK(std::abs(steps - ratio / p.step_fraction()) / (ratio / p.step_fraction()) < 0.01);

  CHECK(tr.records.front().t == 0.0);
  CHECK(tr.records.back().t == p.horizon());
  CHECK(tr.end_time == p.horizon());
  for (std::size_t k = 0; k + 1 < tr.records.size(); ++k) {
    const TrajectoryRecord& r = tr.records[k];
    const double dt = tr.records[k + 1].t - r.t;
    if (k + 2 < tr.records.size()) {
      CHECK(dt == doctest::Approx(adaptive_dt(r.t, p)).epsilon(1e-9));
      const Eigen::MatrixXd lhs = r.u * adaptive_dt(r.t, p);
      const Eigen::MatrixXd rhs = p.step_fraction() * (r.mubar - r.x);
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    } else {
      CHECK(dt <= adaptive_dt(r.t, p));
    }
    // mubar stays in the convex hull of the targets.
    CHECK(r.mubar.minCoeff() >= -1.0 - 1e-12);
    CHECK(r.mubar.maxCoeff() <= 1.0 + 1e-12);
  }
}

TEST_CASE("simulate is deterministic per seed") {
  const Scenario s = io::builtin_scenario("firemen-6x3");
  const Trajectory a = simulate(s, 12);
  const Trajectory b = simulate(s, 12);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].t == b.records[k].t);
    CHECK(a.records[k].x == b.records[k].x);
    CHECK(a.records[k].marginals == b.records[k].marginals);
  }
  CHECK_FALSE(simulate(s, 13).records.back().x == a.records.back().x);
}

TEST_CASE("mirrored scenario with negated noise gives the negated trajectory") {
  const Scenario s = line_scenario(column({0.1, -0.3, 0.2}), {-1.0, 0.0, 1.0},
                                   firemen_factors(3, 3, 1.0));
  const Scenario mirrored = line_scenario(column({-0.1, 0.3, -0.2}), {1.0, -0.0, -1.0},
                                          firemen_factors(3, 3, 1.0));
  SeededNoise noise(21);
  NegatedNoise negated(21);
  const Trajectory a = simulate(s, noise);
  const Trajectory b = simulate(mirrored, negated);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t k = 0; k < a.records.size(); ++k) {
    CHECK(a.records[k].x == -b.records[k].x);
    CHECK(a.records[k].mubar == -b.records[k].mubar);
    CHECK(a.records[k].u == -b.records[k].u);
  }
}

TEST_CASE("small noise lands next to the single target") {
  const ControlParams quiet(1e-4, 1.0, 1e3, 0.01, 1.0);
  const Scenario s = line_scenario(column({0.0}), {0.7}, FactoredEndCost{1, {}, 0.0}, quiet);
  const double scale = std::sqrt(quiet.noise() * quiet.control_weight() / quiet.end_stiffness());
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const double miss = std::abs(simulate(s, seed).records.back().x(0, 0) - 0.7);
    CHECK(miss < 6.0 * scale);
  }
}

TEST_CASE("split two-agent runs end with opposite expected targets (statistical)") {
  const Scenario s = io::builtin_scenario("firemen-2x2");
  int split_runs = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Trajectory tr = simulate(s, seed);
    const TrajectoryRecord& last = tr.records.back();
    if (last.x(0, 0) * last.x(1, 0) >= 0.0) continue;
    ++split_runs;
    CHECK(last.mubar(0, 0) * last.mubar(1, 0) < 0.0);
    CHECK(std::abs(last.mubar(0, 0) + last.mubar(1, 0)) < 1e-6);
  }
  CHECK(split_runs > 10);
}

TEST_CASE("control failure keeps the partial trajectory") {
  const Scenario s = io::builtin_scenario("firemen-2x2");
  PoisonedNoise noise(10);
  try {
    simulate(s, noise);
    FAIL("expected SimulationError");
  } catch (const SimulationError& e) {
    CHECK(e.partial().records.size() == 6);
    CHECK(e.partial().end_time > 0.0);
  }
}
