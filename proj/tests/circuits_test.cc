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

#include "rqgan/circuits.h"

#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.h"

namespace rqgan {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> random_angles(std::size_t count, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<double> out(count);
  for (double& x : out) x = angle(rng);
  return out;
}

std::vector<double> random_unit(std::size_t dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> v(dim);
  double s = 0.0;
  for (double& x : v) {
    x = normal(rng);
    s += x * x;
  }
  for (double& x : v) x /= std::sqrt(s);
  return v;
}

TEST(GateCountTest, ReferenceTable) {
  const int rows[3][5] = {{2, 3, 1, 9, 4}, {3, 7, 4, 18, 11}, {4, 15, 11, 35, 26}};
  for (const auto& r : rows) {
    const CircuitTemplate g = build_generator(r[0]);
    const CircuitTemplate d = build_discriminator(r[0]);
    EXPECT_EQ(g.count(GateKind::kRotationY), static_cast<std::size_t>(r[1]));
    EXPECT_EQ(g.count(GateKind::kControlledNot), static_cast<std::size_t>(r[2]));
    EXPECT_EQ(d.count(GateKind::kRotationY), static_cast<std::size_t>(r[3]));
    EXPECT_EQ(d.count(GateKind::kControlledNot), static_cast<std::size_t>(r[4]));
  }
}

TEST(GateCountTest, ClosedFormsUpToEightQubits) {
  for (int n = 1; n <= 8; ++n) {
    const CircuitTemplate g = build_generator(n);
    EXPECT_EQ(g.num_params(), (1 << n) - 1);
    EXPECT_EQ(g.count(GateKind::kControlledNot), static_cast<std::size_t>((1 << n) - n - 1));
    const CircuitTemplate d = build_discriminator(n);
    EXPECT_EQ(d.num_qubits(), n + 1);
    EXPECT_EQ(d.num_params(), (1 << (n + 1)) + n - 1);
  }
}

TEST(GeneratorTest, TwoQubitLayout) {
  EXPECT_EQ(build_generator(2).dump(),
            "RY q0 slot=0\nRY q1 slot=1\nCX q0 q1\nRY q1 slot=2\n");
}

TEST(GeneratorTest, DiscriminatorExtendsGeneratorLayout) {
  for (int n = 1; n <= 5; ++n) {
    const auto inner = build_generator(n + 1).gates();
    const auto d = build_discriminator(n).gates();
    ASSERT_EQ(d.size(), inner.size() + n);
    for (std::size_t i = 0; i < inner.size(); ++i) EXPECT_EQ(d[i], inner[i]);
    for (int q = 0; q < n; ++q) {
      EXPECT_EQ(d[inner.size() + q], Gate::ry(q, (1 << (n + 1)) - 1 + q));
    }
  }
}

TEST(GeneratorTest, ThreeQubitClosedForm) {
  std::mt19937_64 rng(11);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<double> t = random_angles(7, rng);
    const StateVector s = generator_state(3, t);
    worst = std::max(worst, oracle::max_abs_diff(oracle::three_qubit(t.data()), s.amplitudes()));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(GeneratorTest, TwoQubitMarginalOfThreeQubitForm) {
  std::mt19937_64 rng(12);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::vector<double> t = random_angles(3, rng);
    const StateVector s = generator_state(2, t);
    worst = std::max(worst,
                     oracle::max_abs_diff(oracle::two_qubit_consistent(t.data()), s.amplitudes()));
  }
  EXPECT_LT(worst, 1e-12);
}

TEST(GeneratorTest, DenseOracleUpToFiveQubits) {
  std::mt19937_64 rng(13);
  for (int n = 1; n <= 5; ++n) {
    const CircuitTemplate g = build_generator(n);
    for (int trial = 0; trial < 20; ++trial) {
      const std::vector<double> t = random_angles(g.num_params(), rng);
      EXPECT_LT(oracle::max_abs_diff(oracle::run(g, t), generator_state(g, t).amplitudes()),
                1e-12);
    }
  }
}

TEST(UcrTest, BranchMapMatchesDenseBlocks) {
  std::mt19937_64 rng(14);
  for (int m = 1; m <= 3; ++m) {
    std::vector<int> controls(m);
    for (int c = 0; c < m; ++c) controls[c] = c;
    const int target = m;
    const int slots = 1 << m;
    const auto gates = build_ucr(controls, target, 0);
    EXPECT_EQ(gates.size(), static_cast<std::size_t>(2 * slots - 1));
    const CircuitTemplate tmpl(m + 1, gates);
    const auto branches = ucr_branches(gates, controls, 0, slots);
    const std::vector<double> t = random_angles(slots, rng);
    const oracle::Dense u = oracle::unitary(tmpl, t);
    for (int l = 0; l < slots; ++l) {
      double phi = 0.0;
      for (int k = 0; k < slots; ++k) phi += branches[l].coeffs[k] * t[k];
      const double c = std::cos(phi / 2), s = std::sin(phi / 2);
      // Column |l,0>: control register unchanged, target rotated.
      const std::size_t col = 2 * static_cast<std::size_t>(l);
      for (std::size_t row = 0; row < u.size(); ++row) {
        double expected = 0.0;
        if (row == col) expected = branches[l].flipped ? -s : c;
        if (row == col + 1) expected = branches[l].flipped ? c : s;
        EXPECT_NEAR(u[row][col], expected, 1e-13) << "m=" << m << " l=" << l;
      }
    }
    // Coefficient rows form a signed Hadamard basis.
    for (int a = 0; a < slots; ++a)
      for (int b = 0; b < slots; ++b) {
        int d = 0;
        for (int k = 0; k < slots; ++k) d += branches[a].coeffs[k] * branches[b].coeffs[k];
        EXPECT_EQ(d, a == b ? slots : 0);
      }
  }
}

TEST(UcrTest, RejectsBadQubits) {
  const std::vector<int> none;
  EXPECT_THROW(build_ucr(none, 1, 0), std::invalid_argument);
  const std::vector<int> dup = {0, 1};
  EXPECT_THROW(build_ucr(dup, 1, 0), std::invalid_argument);
}

TEST(HadamardTest, SylvesterOrthogonality) {
  const Matrix h = hadamard(8);
  const Matrix p = h * h.transpose();
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) EXPECT_EQ(p(i, j), i == j ? 8.0 : 0.0);
  EXPECT_EQ(hadamard(2)(1, 1), -1.0);
  EXPECT_THROW(hadamard(3), std::invalid_argument);
}

TEST(StatePreparationTest, RoundTripReachesEveryState) {
  std::mt19937_64 rng(15);
  for (int n = 1; n <= 6; ++n) {
    double worst = 0.0;
    for (int trial = 0; trial < 300; ++trial) {
      const std::vector<double> v = random_unit(std::size_t{1} << n, rng);
      const StatePreparation prep = state_to_params(StateVector::from_amplitudes(v));
      ASSERT_EQ(prep.params.size(), (std::size_t{1} << n) - 1);
      for (double p : prep.params) {
        EXPECT_GE(p, -kPi);
        EXPECT_LT(p, kPi);
      }
      const StateVector out = generator_state(n, prep.params);
      for (std::size_t i = 0; i < v.size(); ++i) {
        worst = std::max(worst, std::abs(out[i] - prep.sign * v[i]));
      }
    }
    EXPECT_LT(worst, 1e-10) << "n=" << n;
  }
}

TEST(StatePreparationTest, SparseTargets) {
  for (int n = 1; n <= 4; ++n) {
    const std::size_t dim = std::size_t{1} << n;
    for (std::size_t i = 0; i < dim; ++i) {
      for (double sign : {1.0, -1.0}) {
        std::vector<double> v(dim, 0.0);
        v[i] = sign;
        const StatePreparation prep = state_to_params(StateVector::from_amplitudes(v));
        const StateVector out = generator_state(n, prep.params);
        for (std::size_t j = 0; j < dim; ++j) EXPECT_NEAR(out[j], prep.sign * v[j], 1e-12);
      }
    }
  }
}

}  // namespace
}  // namespace rqgan
