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

#ifndef CLOUDSEL_RECOMMEND_HPP
#define CLOUDSEL_RECOMMEND_HPP

#include <cstddef>
#include <vector>

#include "cloudsel/ahp.hpp"
#include "cloudsel/matcher.hpp"
#include "cloudsel/nsga2.hpp"

namespace cloudsel {

struct Recommendation {
  PricedBundle priced;
  double score = 0.0;
};

struct HybridOptions {
  CompatibilityPolicy policy = CompatibilityPolicy::SameRegion;
  VagueMapping vague_mapping;
  double consistency_threshold = kDefaultConsistencyThreshold;
  std::size_t limit = 10;
  PenaltyConfig penalties;
  const PopularityStats* popularity = nullptr;
  double recommended_weight = 0.1;
};

struct HybridResult {
  CriterionWeights weights;
  std::vector<Recommendation> ranked;  // score desc, total cost asc, bundle key asc
  std::size_t evaluations = 0;
};

/// AHP-weighted recommendation. Criterion weights come from `matrix` once;
/// bundles are scored by SAW over min-max normalized criterion values and
/// searched with the GA using that score as a scalar fitness under
/// constrained domination. The final ranking normalizes over every feasible
/// bundle the search evaluated.
///
/// Throws inconsistent_judgments when the consistency ratio exceeds the
/// threshold and bad_request for malformed requirements.
HybridResult hybrid_recommend(const Catalog& catalog, const RequirementSpec& spec, const PairwiseMatrix& matrix,
                              const GAParams& params, const HybridOptions& options = {});

/// SAW scores of `bundles` under `weights`, normalizing each criterion over
/// the given set. Criteria order follows `criteria`.
std::vector<double> saw_scores(const std::vector<Bundle>& bundles, const std::vector<CriterionSpec>& criteria,
                               std::span<const double> weights);

}  // namespace cloudsel

#endif  // CLOUDSEL_RECOMMEND_HPP
