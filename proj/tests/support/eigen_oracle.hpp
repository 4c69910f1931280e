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

// Dense eigen-solver reference for AHP weights and consistency ratio.
#ifndef CLOUDSEL_TESTS_EIGEN_ORACLE_HPP
#define CLOUDSEL_TESTS_EIGEN_ORACLE_HPP

#include <vector>

#include <Eigen/Eigenvalues>

namespace cloudsel::testing {

struct EigenAhp {
  double lambda_max = 0.0;
  std::vector<double> weights;
  double consistency_ratio = 0.0;
};

inline EigenAhp eigen_ahp(const std::vector<std::vector<double>>& rows) {
  static const double kRandomIndex[] = {0.0, 0.0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];

  Eigen::EigenSolver<Eigen::MatrixXd> solver(m);
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < n; ++i)
    if (solver.eigenvalues()[i].real() > solver.eigenvalues()[best].real()) best = i;

  EigenAhp out;
  out.lambda_max = solver.eigenvalues()[best].real();
  Eigen::VectorXd v = solver.eigenvectors().col(best).real();
  const double sum = v.sum();
  for (Eigen::Index i = 0; i < n; ++i) out.weights.push_back(v[i] / sum);
  if (n > 2) {
    const double ri = kRandomIndex[std::min<std::size_t>(rows.size(), 10) - 1];
    out.consistency_ratio = (out.lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1) / ri;
  }
  return out;
}

}  // namespace cloudsel::testing

#endif  // CLOUDSEL_TESTS_EIGEN_ORACLE_HPP
