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

#include "cloudsel/saw.hpp"

#include <algorithm>

#include <fmt/format.h>

namespace cloudsel {

std::vector<double> normalize_criteria(std::span<const double> values, Direction direction) {
  std::vector<double> out(values.size(), 1.0);
  if (values.empty()) return out;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (hi == lo) return out;
  const double range = hi - lo;
  for (std::size_t i = 0; i < values.size(); ++i)
    out[i] = direction == Direction::Maximize ? (values[i] - lo) / range : (hi - values[i]) / range;
  return out;
}

double saw_score(std::span<const double> normalized, std::span<const double> weights) {
  if (normalized.size() != weights.size())
    throw invariant_error(
        fmt::format("{} normalized values for {} weights", normalized.size(), weights.size()));
  double score = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) score += weights[i] * normalized[i];
  return score;
}

}  // namespace cloudsel
