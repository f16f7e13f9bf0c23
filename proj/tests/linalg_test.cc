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

#include "rqgan/linalg.h"

#include <random>

#include <gtest/gtest.h>

namespace rqgan {
namespace {

Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Matrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = normal(rng);
  return a;
}

TEST(MatrixTest, ProductAndTranspose) {
  Matrix a(2, 3);
  a.data() = {1, 2, 3, 4, 5, 6};
  const Matrix at = a.transpose();
  ASSERT_EQ(at.rows(), 3u);
  EXPECT_EQ(at(2, 1), 6.0);
  const Matrix g = a * at;
  EXPECT_EQ(g(0, 0), 14.0);
  EXPECT_EQ(g(0, 1), 32.0);
  EXPECT_EQ(g(1, 1), 77.0);
  const std::vector<double> x = {1, 0, -1};
  const std::vector<double> y = a * std::span<const double>(x);
  EXPECT_EQ(y[0], -2.0);
  EXPECT_EQ(y[1], -2.0);
}

TEST(MatrixTest, DotAndNorm) {
  const std::vector<double> a = {3, 4};
  EXPECT_EQ(dot(a, a), 25.0);
  EXPECT_EQ(norm(a), 5.0);
}

TEST(JacobiTest, TwoByTwoKnownSpectrum) {
  Matrix a(2, 2);
  a.data() = {2, 1, 1, 2};
  const SymmetricEigen e = jacobi_eigen(a);
  EXPECT_NEAR(e.values[0], 3.0, 1e-14);
  EXPECT_NEAR(e.values[1], 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.vectors(0, 0)), std::sqrt(0.5), 1e-14);
}

TEST(JacobiTest, DiagonalIsSortedDescending) {
  Matrix a(3, 3);
  a(0, 0) = 1.0;
  a(1, 1) = 5.0;
  a(2, 2) = -2.0;
  const SymmetricEigen e = jacobi_eigen(a);
  EXPECT_EQ(e.values, (std::vector<double>{5.0, 1.0, -2.0}));
}

TEST(JacobiTest, RandomMatricesSatisfyEigenEquation) {
  for (std::size_t n : {1u, 4u, 9u, 20u}) {
    const Matrix a = random_symmetric(n, 17 + n);
    const SymmetricEigen e = jacobi_eigen(a);
    for (std::size_t k = 0; k < n; ++k) {
      if (k + 1 < n) {
        EXPECT_GE(e.values[k], e.values[k + 1]);
      }
      for (std::size_t i = 0; i < n; ++i) {
        double av = 0.0;
        for (std::size_t j = 0; j < n; ++j) av += a(i, j) * e.vectors(j, k);
        EXPECT_NEAR(av, e.values[k] * e.vectors(i, k), 1e-11);
      }
      for (std::size_t m = 0; m < n; ++m) {
        double d = 0.0;
        for (std::size_t i = 0; i < n; ++i) d += e.vectors(i, k) * e.vectors(i, m);
        EXPECT_NEAR(d, k == m ? 1.0 : 0.0, 1e-12);
      }
    }
  }
}

TEST(JacobiTest, RejectsBadInput) {
  EXPECT_THROW(jacobi_eigen(Matrix(2, 3)), std::invalid_argument);
  Matrix a(2, 2);
  a.data() = {1, 2, 3, 4};
  EXPECT_THROW(jacobi_eigen(a), std::invalid_argument);
}

}  // namespace
}  // namespace rqgan
