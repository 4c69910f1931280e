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

#ifndef CLOUDSEL_AHP_HPP
#define CLOUDSEL_AHP_HPP

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cloudsel {

/// Reciprocal pairwise-comparison matrix: entry (i, j) states how much more
/// important criterion i is than criterion j.
class PairwiseMatrix {
 public:
  /// n x n matrix of ones (all criteria equally important).
  explicit PairwiseMatrix(std::size_t n);

  /// Throws invariant_error unless square, positive, unit diagonal and
  /// reciprocal within 1e-9.
  explicit PairwiseMatrix(std::vector<std::vector<double>> rows);

  /// Builds the full matrix from the strictly-upper triangle given row by
  /// row: (0,1), (0,2), ..., (1,2), ...
  static PairwiseMatrix from_upper_triangle(std::size_t n, std::span<const double> upper);

  /// The perfectly consistent matrix w_i / w_j.
  static PairwiseMatrix from_weights(std::span<const double> weights);

  std::size_t size() const noexcept { return n_; }
  double operator()(std::size_t i, std::size_t j) const noexcept { return entries_[i * n_ + j]; }
  std::vector<std::vector<double>> rows() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> entries_;
};

struct CriterionWeights {
  std::vector<std::string> names;  // may be empty when the caller did not label criteria
  std::vector<double> weights;     // positive, sums to 1
  double consistency_ratio = 0.0;
  double lambda_max = 0.0;
  std::size_t iterations = 0;

  /// Weight of a labelled criterion; throws invariant_error if absent.
  double weight(std::string_view name) const;
};

inline constexpr double kAhpResidual = 1e-10;
inline constexpr std::size_t kAhpMaxIterations = 10000;
inline constexpr double kDefaultConsistencyThreshold = 0.10;

/// Saaty's random consistency index for an n x n matrix.
double random_index(std::size_t n) noexcept;

/// Principal eigenvector by power iteration, normalized to sum 1, and the
/// consistency ratio ((lambda_max - n) / (n - 1)) / RI(n), taken as 0 for n <= 2.
CriterionWeights ahp_weights(const PairwiseMatrix& matrix, std::vector<std::string> names = {});

}  // namespace cloudsel

#endif  // CLOUDSEL_AHP_HPP
