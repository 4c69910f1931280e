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

#ifndef CLOUDSEL_SAW_HPP
#define CLOUDSEL_SAW_HPP

#include <span>
#include <vector>

#include "cloudsel/matcher.hpp"

namespace cloudsel {

/// Min-max normalization onto a benefit scale in [0, 1]. A constant column
/// (including a single value) maps to all 1.0.
std::vector<double> normalize_criteria(std::span<const double> values, Direction direction);

/// Weighted sum of normalized criterion values. Throws invariant_error when
/// the two vectors differ in length.
double saw_score(std::span<const double> normalized, std::span<const double> weights);

}  // namespace cloudsel

#endif  // CLOUDSEL_SAW_HPP
