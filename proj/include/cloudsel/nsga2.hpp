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

#ifndef CLOUDSEL_NSGA2_HPP
#define CLOUDSEL_NSGA2_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "cloudsel/matcher.hpp"

namespace cloudsel {

/// Index into each of the compute, storage and transfer candidate lists.
using Genome = std::array<std::size_t, 3>;

struct Individual {
  Genome genome{};
  std::vector<double> raw_objectives;  // as evaluated, minimization convention
  std::vector<double> objectives;      // what ranking uses; equals raw unless scalarized
  double violation = 0.0;              // 0 iff feasible
  std::size_t rank = 0;
  double crowding = 0.0;

  bool feasible() const noexcept { return violation == 0.0; }
};

inline constexpr double kCrowdingSentinel = std::numeric_limits<double>::infinity();

/// Feasible beats infeasible, smaller violation beats larger, and two
/// feasible individuals compare by Pareto dominance.
bool constrained_dominates(const Individual& a, const Individual& b);

/// Plain Pareto dominance on minimization vectors.
bool pareto_dominates(std::span<const double> a, std::span<const double> b);

/// Partitions `population` into fronts of indices (front 0 first) and
/// stores each member's front index in `rank`.
std::vector<std::vector<std::size_t>> non_dominated_sort(std::vector<Individual>& population);

/// Crowding distance of each member of `front` (indices into population).
std::vector<double> crowding_distance(const std::vector<Individual>& population,
                                      std::span<const std::size_t> front);

struct GAParams {
  std::size_t population_size = 40;
  std::size_t generations = 100;
  double crossover_rate = 0.9;
  double mutation_rate = 0.3;
  std::size_t tournament_size = 2;
  std::uint64_t seed = 1;

  void validate() const;  // throws bad_request
};

struct ParetoFront {
  std::vector<Individual> members;
  std::size_t generation = 0;
  std::uint64_t seed = 0;
  std::size_t evaluations = 0;  // distinct genomes evaluated
};

struct Evaluation {
  std::vector<double> objectives;
  double violation = 0.0;
};

struct SearchSpace {
  Genome gene_sizes{};  // every entry >= 1
  std::function<Evaluation(const Genome&)> evaluate;
  /// Optional; applied to every generated genome before evaluation.
  std::function<void(Genome&)> repair;
};

/// Rewrites `objectives` of a merged parent+offspring pool from its
/// `raw_objectives` before ranking (used for pool-relative scalarization).
using Scalarizer = std::function<void(std::vector<Individual>&)>;

/// Elitist NSGA-II over index-triple genomes. Deterministic for a given
/// seed. Returns the non-dominated front of the final population with one
/// member per distinct genome. `observer` sees every distinct evaluation.
ParetoFront nsga2(const SearchSpace& space, const GAParams& params, const Scalarizer& scalarize = {},
                  const std::function<void(const Individual&)>& observer = {});

/// Optional constraints handled through the violation measure.
struct PenaltyConfig {
  std::optional<double> budget_cap;  // in the requirement currency
  double budget_scale = 1.0;
  std::optional<double> deadline_hours;
  double workload_hours = 0.0;  // serial hours on one VM of relative speed 1
  double deadline_scale = 1.0;
  std::optional<Continent> required_continent;
  double continent_scale = 1.0;
  double compatibility_scale = 1.0;  // per incompatible offer pair

  void validate() const;  // throws bad_request when a scale is not positive
};

/// Everything needed to evaluate a genome against the catalog.
struct ProblemInstance {
  const Catalog& catalog;
  const CandidateSets& candidates;
  const ResolvedRequirements& spec;
  CompatibilityPolicy policy = CompatibilityPolicy::SameRegion;
  const PopularityStats* popularity = nullptr;
  double recommended_weight = 0.1;
};

/// Genome to joined triple (absent components map to kAbsent).
JoinedTriple decode_genome(const CandidateSets& candidates, const Genome& genome);

/// Total constraint violation of a priced bundle.
double constraint_violation(const ProblemInstance& problem, const JoinedTriple& triple,
                            const PricedBundle& priced, const PenaltyConfig& penalties);

/// Moves storage and transfer genes to the next candidate (cyclically) that
/// is compatible with the earlier components; leaves a gene unchanged when
/// no compatible candidate exists.
void repair_genome(const CandidateSets& candidates, CompatibilityPolicy policy, Genome& genome);

/// Builds the search space for `problem`. `problem` must outlive the result.
SearchSpace make_search_space(const ProblemInstance& problem, const std::vector<CriterionSpec>& objectives,
                              const PenaltyConfig& penalties);

/// Multi-objective search over the candidate sets. Throws bad_request when
/// an enabled candidate set is empty.
ParetoFront nsga2_run(const ProblemInstance& problem, const std::vector<CriterionSpec>& objectives,
                      const PenaltyConfig& penalties, const GAParams& params);

inline constexpr std::size_t kBruteForceLimit = 1'000'000;

/// Exact non-dominated subset by pairwise comparison. Refuses (invariant_error)
/// above kBruteForceLimit bundles.
std::vector<Bundle> brute_force_pareto(const std::vector<Bundle>& bundles,
                                       const std::vector<CriterionSpec>& objectives);

}  // namespace cloudsel

#endif  // CLOUDSEL_NSGA2_HPP
