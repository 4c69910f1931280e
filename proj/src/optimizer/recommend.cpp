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

#include "cloudsel/recommend.hpp"

#include <algorithm>
#include <numeric>

#include <fmt/format.h>

#include "cloudsel/saw.hpp"

namespace cloudsel {

std::vector<double> saw_scores(const std::vector<Bundle>& bundles, const std::vector<CriterionSpec>& criteria,
                               std::span<const double> weights) {
  if (criteria.size() != weights.size())
    throw invariant_error(fmt::format("{} criteria for {} weights", criteria.size(), weights.size()));
  std::vector<std::vector<double>> normalized;  // per criterion, per bundle
  for (const auto& c : criteria) {
    std::vector<double> column;
    column.reserve(bundles.size());
    for (const auto& b : bundles) {
      auto it = b.criteria_values.find(c.name());
      if (it == b.criteria_values.end())
        throw invariant_error(fmt::format("bundle {} has no value for '{}'", b.key(), c.name()));
      column.push_back(it->second);
    }
    normalized.push_back(normalize_criteria(column, c.direction));
  }
  std::vector<double> scores(bundles.size());
  std::vector<double> row(criteria.size());
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    for (std::size_t k = 0; k < criteria.size(); ++k) row[k] = normalized[k][i];
    scores[i] = saw_score(row, weights);
  }
  return scores;
}

HybridResult hybrid_recommend(const Catalog& catalog, const RequirementSpec& spec, const PairwiseMatrix& matrix,
                              const GAParams& params, const HybridOptions& options) {
  if (spec.criteria.empty()) throw bad_request("criteria", "at least one criterion is required");
  if (matrix.size() != spec.criteria.size())
    throw bad_request("comparisons", fmt::format("comparison matrix is {0}x{0} but {1} criteria were given",
                                                 matrix.size(), spec.criteria.size()));

  std::vector<std::string> names;
  for (const auto& c : spec.criteria) names.push_back(c.name());

  HybridResult result;
  result.weights = ahp_weights(matrix, names);
  if (result.weights.consistency_ratio > options.consistency_threshold)
    throw inconsistent_judgments(result.weights.consistency_ratio, options.consistency_threshold);

  const ResolvedRequirements resolved = resolve_requirements(spec, options.vague_mapping);
  catalog.currency_table().rate(resolved.currency);
  const CandidateSets candidates = filter_candidates(catalog, resolved);
  const auto& on = candidates.components;
  if ((on.compute && candidates.compute.empty()) || (on.storage && candidates.storage.empty()) ||
      (on.transfer && candidates.transfer.empty()) || (!on.compute && !on.storage && !on.transfer))
    return result;

  const ProblemInstance problem{catalog, candidates, resolved, options.policy, options.popularity,
                                options.recommended_weight};
  options.penalties.validate();
  const SearchSpace space = make_search_space(problem, resolved.criteria, options.penalties);
  const std::vector<double>& weights = result.weights.weights;

  // SAW over the current pool; each raw objective is already in the
  // minimization convention, so every column is normalized as "minimize".
  const Scalarizer scalarize = [&weights](std::vector<Individual>& pool) {
    const std::size_t m = weights.size();
    std::vector<double> lo(m, std::numeric_limits<double>::infinity());
    std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
    for (const auto& ind : pool) {
      for (std::size_t k = 0; k < m; ++k) {
        lo[k] = std::min(lo[k], ind.raw_objectives[k]);
        hi[k] = std::max(hi[k], ind.raw_objectives[k]);
      }
    }
    for (auto& ind : pool) {
      double score = 0.0;
      for (std::size_t k = 0; k < m; ++k) {
        const double benefit = hi[k] == lo[k] ? 1.0 : (hi[k] - ind.raw_objectives[k]) / (hi[k] - lo[k]);
        score += weights[k] * benefit;
      }
      ind.objectives.assign(1, -score);
    }
  };

  std::vector<Genome> feasible;
  const auto observe = [&feasible](const Individual& ind) {
    if (ind.feasible()) feasible.push_back(ind.genome);
  };
  const ParetoFront front = nsga2(space, params, scalarize, observe);
  result.evaluations = front.evaluations;

  std::vector<PricedBundle> priced;
  std::vector<Bundle> bundles;
  for (const auto& g : feasible) {
    priced.push_back(price_bundle(catalog, make_bundle(catalog, candidates, decode_genome(candidates, g)), resolved,
                                  options.popularity, options.recommended_weight));
    bundles.push_back(priced.back().bundle);
  }
  const std::vector<double> scores = saw_scores(bundles, resolved.criteria, weights);

  std::vector<std::size_t> order(priced.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    if (priced[a].cost.total != priced[b].cost.total) return priced[a].cost.total < priced[b].cost.total;
    return priced[a].bundle.key() < priced[b].bundle.key();
  });
  for (std::size_t i = 0; i < order.size() && result.ranked.size() < options.limit; ++i)
    result.ranked.push_back({std::move(priced[order[i]]), scores[order[i]]});
  return result;
}

}  // namespace cloudsel
