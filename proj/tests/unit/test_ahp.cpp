// Copyright 2026 The cloudsel Authors
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

#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include "cloudsel/ahp.hpp"
#include "cloudsel/errors.hpp"
#include "support/eigen_oracle.hpp"
#include "support/oracles.hpp"

namespace cloudsel {
namespace {

const std::vector<std::vector<double>> kInconsistent = {{1, 2, 6}, {1.0 / 2, 1, 2}, {1.0 / 6, 1.0 / 2, 1}};

TEST(Ahp, AllOnesIsUniform) {
  const auto w = ahp_weights(PairwiseMatrix(3));
  for (double x : w.weights) EXPECT_NEAR(x, 1.0 / 3, 1e-12);
  EXPECT_EQ(w.consistency_ratio, 0.0);
}

TEST(Ahp, RecoversConsistentWeights) {
  const std::vector<double> w = {4.0 / 7, 2.0 / 7, 1.0 / 7};
  const auto out = ahp_weights(PairwiseMatrix::from_weights(w));
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(out.weights[i], w[i], 1e-6);
  EXPECT_LT(out.consistency_ratio, 1e-6);
}

TEST(Ahp, InconsistentMatrixMatchesEigenSolver) {
  const auto ours = ahp_weights(PairwiseMatrix(kInconsistent));
  const auto oracle = testing::eigen_ahp(kInconsistent);
  EXPECT_GT(ours.consistency_ratio, 0.0);
  EXPECT_NEAR(ours.consistency_ratio, oracle.consistency_ratio, 1e-6);
  EXPECT_NEAR(ours.lambda_max, oracle.lambda_max, 1e-6);
  for (std::size_t i = 0; i < 3; ++i) EXPECT_NEAR(ours.weights[i], oracle.weights[i], 1e-6);
}

TEST(Ahp, RandomMatricesMatchEigenSolver) {
  std::mt19937_64 rng(17);
  const double scale[] = {1.0 / 9, 1.0 / 7, 1.0 / 5, 1.0 / 3, 1, 3, 5, 7, 9};
  for (int round = 0; round < 100; ++round) {
    const std::size_t n = static_cast<std::size_t>(testing::uniform_int(rng, 2, 9));
    std::vector<double> upper;
    for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) upper.push_back(scale[testing::uniform_int(rng, 0, 8)]);
    const auto m = PairwiseMatrix::from_upper_triangle(n, upper);
    const auto ours = ahp_weights(m);
    const auto oracle = testing::eigen_ahp(m.rows());
    EXPECT_NEAR(ours.consistency_ratio, oracle.consistency_ratio, 1e-6);
    for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(ours.weights[i], oracle.weights[i], 1e-6);
  }
}

TEST(Ahp, WeightsArePositiveAndSumToOne) {
  std::mt19937_64 rng(18);
  for (int round = 0; round < 100; ++round) {
    std::vector<double> w(static_cast<std::size_t>(testing::uniform_int(rng, 1, 10)));
    for (double& x : w) x = testing::uniform(rng, 0.01, 1.0);
    const auto out = ahp_weights(PairwiseMatrix::from_weights(w));
    EXPECT_NEAR(std::accumulate(out.weights.begin(), out.weights.end(), 0.0), 1.0, 1e-9);
    for (double x : out.weights) EXPECT_GT(x, 0.0);
    EXPECT_GE(out.consistency_ratio, 0.0);
  }
}

TEST(Ahp, SmallMatricesHaveZeroRatio) {
  EXPECT_EQ(ahp_weights(PairwiseMatrix(1)).consistency_ratio, 0.0);
  EXPECT_EQ(ahp_weights(PairwiseMatrix::from_upper_triangle(2, std::vector<double>{7})).consistency_ratio, 0.0);
  const auto two = ahp_weights(PairwiseMatrix::from_upper_triangle(2, std::vector<double>{3}));
  EXPECT_NEAR(two.weights[0], 0.75, 1e-9);
}

TEST(Ahp, RandomIndexTable) {
  const double expected[] = {0, 0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  for (std::size_t n = 1; n <= 10; ++n) EXPECT_DOUBLE_EQ(random_index(n), expected[n - 1]);
  EXPECT_DOUBLE_EQ(random_index(15), 1.49);
}

TEST(Ahp, Names) {
  const auto w = ahp_weights(PairwiseMatrix::from_upper_triangle(2, std::vector<double>{3}), {"cost", "speed"});
  EXPECT_NEAR(w.weight("cost"), 0.75, 1e-9);
  EXPECT_THROW(w.weight("memory"), invariant_error);
}

TEST(PairwiseMatrix, RejectsMalformedInput) {
  EXPECT_THROW(PairwiseMatrix({{1, 2}, {0.4, 1}}), invariant_error);
  EXPECT_THROW(PairwiseMatrix({{1, 2}, {0.5, 2}}), invariant_error);
  EXPECT_THROW(PairwiseMatrix({{1, -1}, {-1, 1}}), invariant_error);
  EXPECT_THROW(PairwiseMatrix({{1, 2, 3}, {0.5, 1}}), invariant_error);
  EXPECT_THROW(PairwiseMatrix::from_upper_triangle(3, std::vector<double>{1, 2}), invariant_error);
  EXPECT_NO_THROW(PairwiseMatrix m(kInconsistent));
}

TEST(PairwiseMatrix, UpperTriangleLayout) {
  const auto m = PairwiseMatrix::from_upper_triangle(3, std::vector<double>{2, 6, 2});
  EXPECT_EQ(m(0, 1), 2);
  EXPECT_EQ(m(0, 2), 6);
  EXPECT_EQ(m(1, 2), 2);
  EXPECT_DOUBLE_EQ(m(2, 0), 1.0 / 6);
  EXPECT_EQ(m(1, 1), 1);
}

}  // namespace
}  // namespace cloudsel
