// Copyright 2026 The rqgan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rqgan/simulator.h"

#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace rqgan {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(StateVectorTest, StartsInAllZeros) {
  StateVector s(3);
  EXPECT_EQ(s.dim(), 8u);
  EXPECT_EQ(s[0], 1.0);
  for (std::size_t i = 1; i < 8; ++i) EXPECT_EQ(s[i], 0.0);
  EXPECT_THROW(StateVector(0), std::invalid_argument);
}

TEST(StateVectorTest, RyPiFlipsAndHalfPiBalances) {
  StateVector s(1);
  s.apply_ry(0, kPi);
  EXPECT_NEAR(s[0], 0.0, 1e-15);
  EXPECT_NEAR(s[1], 1.0, 1e-15);
  StateVector h(1);
  h.apply_ry(0, kPi / 2);
  EXPECT_NEAR(h[0], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(h[1], std::sqrt(0.5), 1e-15);
  EXPECT_NEAR(h.expect_z(0), 0.0, 1e-15);
}

TEST(StateVectorTest, QubitZeroIsMostSignificant) {
  StateVector s(2);
  s.apply_ry(0, kPi);
  EXPECT_NEAR(s[2], 1.0, 1e-15);  // |10>
  EXPECT_NEAR(s.expect_z(0), -1.0, 1e-15);
  EXPECT_NEAR(s.expect_z(1), 1.0, 1e-15);
}

TEST(StateVectorTest, CxTruthTable) {
  for (int input = 0; input < 4; ++input) {
    std::vector<double> amps(4, 0.0);
    amps[input] = 1.0;
    StateVector s = StateVector::from_amplitudes(amps);
    s.apply_cx(0, 1);
    const int expected = (input & 2) ? input ^ 1 : input;
    EXPECT_EQ(s[expected], 1.0) << "input " << input;
  }
}

TEST(StateVectorTest, Errors) {
  StateVector s(2);
  EXPECT_THROW(s.apply_ry(2, 0.1), std::out_of_range);
  EXPECT_THROW(s.apply_cx(-1, 0), std::out_of_range);
  EXPECT_THROW(s.apply_cx(1, 1), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes({1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(StateVector::from_amplitudes({1.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(StateVectorTest, RandomCircuitsMatchDenseOracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    std::vector<Gate> gates;
    int slot = 0;
    for (int g = 0; g < 12; ++g) {
      const int t = static_cast<int>(rng() % n);
      if (n > 1 && rng() % 2) {
        const int c = static_cast<int>((t + 1 + rng() % (n - 1)) % n);
        gates.push_back(Gate::cx(c, t));
      } else {
        gates.push_back(Gate::ry(t, slot++));
      }
    }
    const CircuitTemplate tmpl(n, gates);
    std::vector<double> params(tmpl.num_params());
    for (double& p : params) p = angle(rng);
    const StateVector out = run_circuit(tmpl, params, StateVector(n));
    EXPECT_LT(oracle::max_abs_diff(oracle::run(tmpl, params), out.amplitudes()), 1e-13);
    EXPECT_NEAR(out.norm(), 1.0, 1e-13);
  }
}

TEST(CircuitTemplateTest, ValidatesSlotsAndRunsChecks) {
  EXPECT_THROW(CircuitTemplate(2, {Gate::ry(0, 1)}), std::invalid_argument);
  const CircuitTemplate t(2, {Gate::ry(0, 0), Gate::cx(0, 1), Gate::ry(1, 1)});
  EXPECT_EQ(t.num_params(), 2);
  EXPECT_EQ(t.count(GateKind::kControlledNot), 1u);
  EXPECT_EQ(t.dump(), "RY q0 slot=0\nCX q0 q1\nRY q1 slot=1\n");
  const std::vector<double> one = {0.1};
  EXPECT_THROW(run_circuit(t, one, StateVector(2)), std::invalid_argument);
  const std::vector<double> two = {0.1, 0.2};
  EXPECT_THROW(run_circuit(t, two, StateVector(3)), std::invalid_argument);
}

}  // namespace
}  // namespace rqgan
