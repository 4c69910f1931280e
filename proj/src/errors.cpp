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

#include "cloudsel/errors.hpp"

#include <fmt/format.h>

namespace cloudsel {

inconsistent_judgments::inconsistent_judgments(double ratio, double threshold)
    : error(fmt::format("pairwise comparisons are inconsistent (consistency ratio {:.4f} exceeds {:.2f}); "
                        "please revise the comparisons",
                        ratio, threshold)),
      ratio_(ratio),
      threshold_(threshold) {}

namespace {

std::string summarize(const std::vector<Violation>& violations) {
  std::string msg = fmt::format("catalog has {} invariant violation(s)", violations.size());
  for (const auto& v : violations) msg += "\n  " + v.to_string();
  return msg;
}

}  // namespace

validation_error::validation_error(std::vector<Violation> violations)
    : error(summarize(violations)), violations_(std::move(violations)) {}

}  // namespace cloudsel
