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

#include "cloudsel/ahp.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "cloudsel/errors.hpp"

namespace cloudsel {

namespace {

constexpr std::array<double, 10> kRandomIndex = {0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};

constexpr double kReciprocalTolerance = 1e-9;

}  // namespace

PairwiseMatrix::PairwiseMatrix(std::size_t n) : n_(n), entries_(n * n, 1.0) {}

PairwiseMatrix::PairwiseMatrix(std::vector<std::vector<double>> rows) : n_(rows.size()) {
  if (n_ == 0) throw invariant_error("pairwise matrix must have at least one criterion");
  entries_.reserve(n_ * n_);
  for (const auto& row : rows) {
    if (row.size() != n_) throw invariant_error("pairwise matrix must be square");
    entries_.insert(entries_.end(), row.begin(), row.end());
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) {
      const double a = (*this)(i, j);
      if (!(a > 0.0) || !std::isfinite(a))
        throw invariant_error(fmt::format("pairwise entry ({}, {}) must be a positive number", i, j));
      if (i == j && std::abs(a - 1.0) > kReciprocalTolerance)
        throw invariant_error(fmt::format("pairwise diagonal entry ({}, {}) must be 1", i, i));
      if (std::abs(a * (*this)(j, i) - 1.0) > kReciprocalTolerance)
        throw invariant_error(fmt::format("pairwise matrix is not reciprocal at ({}, {})", i, j));
    }
  }
}

PairwiseMatrix PairwiseMatrix::from_upper_triangle(std::size_t n, std::span<const double> upper) {
  if (upper.size() != n * (n - 1) / 2)
    throw invariant_error(fmt::format("{} criteria need {} comparisons, got {}", n, n * (n - 1) / 2, upper.size()));
  std::vector<std::vector<double>> rows(n, std::vector<double>(n, 1.0));
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      if (!(upper[k] > 0.0)) throw invariant_error(fmt::format("comparison {} must be positive", k));
      rows[i][j] = upper[k];
      rows[j][i] = 1.0 / upper[k];
    }
  }
  return PairwiseMatrix(std::move(rows));
}

PairwiseMatrix PairwiseMatrix::from_weights(std::span<const double> weights) {
  std::vector<std::vector<double>> rows(weights.size(), std::vector<double>(weights.size()));
  for (std::size_t i = 0; i < weights.size(); ++i)
    for (std::size_t j = 0; j < weights.size(); ++j) rows[i][j] = i == j ? 1.0 : weights[i] / weights[j];
  return PairwiseMatrix(std::move(rows));
}

std::vector<std::vector<double>> PairwiseMatrix::rows() const {
  std::vector<std::vector<double>> out(n_);
  for (std::size_t i = 0; i < n_; ++i) out[i].assign(entries_.begin() + i * n_, entries_.begin() + (i + 1) * n_);
  return out;
}

double CriterionWeights::weight(std::string_view name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return weights[i];
  throw invariant_error(fmt::format("no weight for criterion '{}'", name));
}

double random_index(std::size_t n) noexcept {
  if (n == 0) return 0.0;
  // Saaty's table stops at 10; larger matrices reuse the last value.
  return kRandomIndex[std::min(n, kRandomIndex.size()) - 1];
}

CriterionWeights ahp_weights(const PairwiseMatrix& matrix, std::vector<std::string> names) {
  const std::size_t n = matrix.size();
  if (!names.empty() && names.size() != n)
    throw invariant_error(fmt::format("{} criterion names for a {}x{} matrix", names.size(), n, n));

  CriterionWeights out;
  out.names = std::move(names);
  std::vector<double> x(n, 1.0 / static_cast<double>(n));
  std::vector<double> y(n);
  double lambda = 0.0;

  for (std::size_t it = 0; it < kAhpMaxIterations; ++it) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += matrix(i, j) * x[j];
      y[i] = acc;
      sum += acc;
    }
    // x sums to 1, so the Rayleigh-like quotient sum(Ax)/sum(x) is sum(Ax).
    lambda = sum;
    double residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual = std::max(residual, std::abs(y[i] - lambda * x[i]));
    out.iterations = it + 1;
    for (std::size_t i = 0; i < n; ++i) x[i] = y[i] / sum;
    if (residual <= kAhpResidual) break;
  }

  out.weights = std::move(x);
  out.lambda_max = lambda;
  if (n > 2) {
    const double ci = (lambda - static_cast<double>(n)) / static_cast<double>(n - 1);
    out.consistency_ratio = std::max(0.0, ci / random_index(n));
  }
  return out;
}

}  // namespace cloudsel
