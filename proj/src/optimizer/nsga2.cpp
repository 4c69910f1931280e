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

#include "cloudsel/nsga2.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <fmt/format.h>

namespace cloudsel {

namespace {

/// mt19937_64 with distribution code spelled out so that draws are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::size_t index(std::size_t n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t v;
    do {
      v = engine_();
    } while (v >= limit);
    return static_cast<std::size_t>(v % bound);
  }

  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

bool better_for_tournament(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

std::size_t space_size(const Genome& sizes, std::size_t cap) {
  std::size_t total = 1;
  for (std::size_t s : sizes) {
    if (s != 0 && total > cap / s) return cap + 1;
    total *= s;
  }
  return total;
}

class Engine {
 public:
  Engine(const SearchSpace& space, const GAParams& params, const Scalarizer& scalarize,
         const std::function<void(const Individual&)>& observer)
      : space_(space), params_(params), scalarize_(scalarize), observer_(observer), rng_(params.seed) {}

  ParetoFront run() {
    population_ = initial_population();
    select(population_);
    for (std::size_t gen = 0; gen < params_.generations; ++gen) {
      std::vector<Individual> merged = population_;
      for (auto& child : offspring()) merged.push_back(std::move(child));
      population_ = unique_by_genome(std::move(merged));
      select(population_);
    }

    ParetoFront front;
    front.generation = params_.generations;
    front.seed = params_.seed;
    front.evaluations = cache_.size();
    for (const auto& ind : population_)
      if (ind.rank == 0) front.members.push_back(ind);
    std::sort(front.members.begin(), front.members.end(), [](const Individual& a, const Individual& b) {
      if (a.objectives != b.objectives) return a.objectives < b.objectives;
      return a.genome < b.genome;
    });
    return front;
  }

 private:
  Individual evaluate(const Genome& g) {
    auto it = cache_.find(g);
    if (it == cache_.end()) {
      Evaluation e = space_.evaluate(g);
      Individual ind;
      ind.genome = g;
      ind.raw_objectives = std::move(e.objectives);
      ind.objectives = ind.raw_objectives;
      ind.violation = e.violation;
      it = cache_.emplace(g, std::move(ind)).first;
      if (observer_) observer_(it->second);
    }
    return it->second;
  }

  Genome random_genome() {
    Genome g{};
    for (std::size_t k = 0; k < g.size(); ++k) g[k] = rng_.index(space_.gene_sizes[k]);
    if (space_.repair) space_.repair(g);
    return g;
  }

  std::vector<Individual> initial_population() {
    const std::size_t n = params_.population_size;
    std::vector<Individual> pop;
    if (space_size(space_.gene_sizes, n) <= n) {
      // Small spaces are enumerated outright.
      Genome g{};
      for (g[0] = 0; g[0] < space_.gene_sizes[0]; ++g[0])
        for (g[1] = 0; g[1] < space_.gene_sizes[1]; ++g[1])
          for (g[2] = 0; g[2] < space_.gene_sizes[2]; ++g[2]) pop.push_back(evaluate(g));
      return pop;
    }
    std::vector<Genome> seen;
    for (std::size_t attempt = 0; pop.size() < n && attempt < 20 * n; ++attempt) {
      Genome g = random_genome();
      if (std::find(seen.begin(), seen.end(), g) != seen.end()) continue;
      seen.push_back(g);
      pop.push_back(evaluate(g));
    }
    return pop;
  }

  const Individual& tournament() {
    const Individual* best = &population_[rng_.index(population_.size())];
    for (std::size_t k = 1; k < params_.tournament_size; ++k) {
      const Individual* other = &population_[rng_.index(population_.size())];
      if (better_for_tournament(*other, *best)) best = other;
    }
    return *best;
  }

  void mutate(Genome& g) {
    std::array<std::size_t, 3> genes{};
    std::size_t count = 0;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (space_.gene_sizes[k] > 1) genes[count++] = k;
    if (count == 0) return;
    const std::size_t k = genes[rng_.index(count)];
    // Draw a different value uniformly.
    const std::size_t v = rng_.index(space_.gene_sizes[k] - 1);
    g[k] = v >= g[k] ? v + 1 : v;
  }

  std::vector<Individual> offspring() {
    std::vector<Genome> children;
    while (children.size() < params_.population_size) {
      Genome a = tournament().genome;
      Genome b = tournament().genome;
      if (rng_.unit() < params_.crossover_rate) {
        for (std::size_t k = 0; k < a.size(); ++k)
          if (rng_.unit() < 0.5) std::swap(a[k], b[k]);
      }
      if (rng_.unit() < params_.mutation_rate) mutate(a);
      if (rng_.unit() < params_.mutation_rate) mutate(b);
      if (space_.repair) {
        space_.repair(a);
        space_.repair(b);
      }
      children.push_back(a);
      if (children.size() < params_.population_size) children.push_back(b);
    }
    std::vector<Individual> out;
    out.reserve(children.size());
    for (const auto& g : children) out.push_back(evaluate(g));
    return out;
  }

  static std::vector<Individual> unique_by_genome(std::vector<Individual> pool) {
    std::vector<Individual> out;
    std::vector<Genome> seen;
    for (auto& ind : pool) {
      if (std::find(seen.begin(), seen.end(), ind.genome) != seen.end()) continue;
      seen.push_back(ind.genome);
      out.push_back(std::move(ind));
    }
    return out;
  }

  /// Keeps the best population_size members of `pool` by front and crowding.
  void select(std::vector<Individual>& pool) {
    for (auto& ind : pool) ind.objectives = ind.raw_objectives;
    if (scalarize_) scalarize_(pool);
    const auto fronts = non_dominated_sort(pool);

    std::vector<Individual> next;
    for (const auto& front : fronts) {
      const auto distances = crowding_distance(pool, front);
      for (std::size_t i = 0; i < front.size(); ++i) pool[front[i]].crowding = distances[i];
      if (next.size() + front.size() <= params_.population_size) {
        for (std::size_t i : front) next.push_back(pool[i]);
        continue;
      }
      std::vector<std::size_t> order(front.begin(), front.end());
      std::stable_sort(order.begin(), order.end(),
                       [&](std::size_t a, std::size_t b) { return pool[a].crowding > pool[b].crowding; });
      for (std::size_t i : order) {
        if (next.size() == params_.population_size) break;
        next.push_back(pool[i]);
      }
      break;
    }
    pool = std::move(next);
  }

  const SearchSpace& space_;
  const GAParams& params_;
  const Scalarizer& scalarize_;
  const std::function<void(const Individual&)>& observer_;
  Rng rng_;
  std::map<Genome, Individual> cache_;
  std::vector<Individual> population_;
};

}  // namespace

bool pareto_dominates(std::span<const double> a, std::span<const double> b) {
  bool strictly = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] > b[k]) return false;
    if (a[k] < b[k]) strictly = true;
  }
  return strictly;
}

bool constrained_dominates(const Individual& a, const Individual& b) {
  const bool fa = a.feasible();
  const bool fb = b.feasible();
  if (fa && !fb) return true;
  if (!fa && fb) return false;
  if (!fa && !fb) return a.violation < b.violation;
  return pareto_dominates(a.objectives, b.objectives);
}

std::vector<std::vector<std::size_t>> non_dominated_sort(std::vector<Individual>& population) {
  const std::size_t n = population.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> domination_count(n, 0);
  std::vector<std::vector<std::size_t>> fronts(1);

  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (constrained_dominates(population[p], population[q])) {
        dominated[p].push_back(q);
        ++domination_count[q];
      } else if (constrained_dominates(population[q], population[p])) {
        dominated[q].push_back(p);
        ++domination_count[p];
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (domination_count[p] == 0) {
      population[p].rank = 0;
      fronts[0].push_back(p);
    }
  }
  for (std::size_t k = 0; !fronts[k].empty(); ++k) {
    std::vector<std::size_t> next;
    for (std::size_t p : fronts[k]) {
      for (std::size_t q : dominated[p]) {
        if (--domination_count[q] == 0) {
          population[q].rank = k + 1;
          next.push_back(q);
        }
      }
    }
    std::sort(next.begin(), next.end());
    fronts.push_back(std::move(next));
  }
  fronts.pop_back();
  return fronts;
}

std::vector<double> crowding_distance(const std::vector<Individual>& population,
                                      std::span<const std::size_t> front) {
  const std::size_t size = front.size();
  std::vector<double> distance(size, 0.0);
  if (size <= 2) {
    std::fill(distance.begin(), distance.end(), kCrowdingSentinel);
    return distance;
  }
  const std::size_t objectives = population[front[0]].objectives.size();
  std::vector<std::size_t> order(size);
  for (std::size_t m = 0; m < objectives; ++m) {
    std::iota(order.begin(), order.end(), 0);
    auto value = [&](std::size_t i) { return population[front[i]].objectives[m]; };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return value(a) < value(b); });
    distance[order.front()] = kCrowdingSentinel;
    distance[order.back()] = kCrowdingSentinel;
    const double range = value(order.back()) - value(order.front());
    if (range == 0.0) continue;
    for (std::size_t i = 1; i + 1 < size; ++i)
      distance[order[i]] += (value(order[i + 1]) - value(order[i - 1])) / range;
  }
  return distance;
}

void GAParams::validate() const {
  if (population_size < 2) throw bad_request("population_size", "population size must be at least 2");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0))
    throw bad_request("crossover_rate", "crossover rate must lie in [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0))
    throw bad_request("mutation_rate", "mutation rate must lie in [0, 1]");
  if (tournament_size < 1) throw bad_request("tournament_size", "tournament size must be at least 1");
}

void PenaltyConfig::validate() const {
  if (!(budget_scale > 0.0) || !(deadline_scale > 0.0) || !(continent_scale > 0.0) ||
      !(compatibility_scale > 0.0))
    throw bad_request("penalties", "penalty scales must be positive");
  if (deadline_hours && !(*deadline_hours > 0.0)) throw bad_request("deadline", "deadline must be positive");
}

ParetoFront nsga2(const SearchSpace& space, const GAParams& params, const Scalarizer& scalarize,
                  const std::function<void(const Individual&)>& observer) {
  params.validate();
  for (std::size_t s : space.gene_sizes)
    if (s == 0) throw bad_request("candidates", "every gene needs at least one value");
  Engine engine(space, params, scalarize, observer);
  return engine.run();
}

JoinedTriple decode_genome(const CandidateSets& candidates, const Genome& genome) {
  const auto& on = candidates.components;
  return {on.compute ? genome[0] : kAbsent, on.storage ? genome[1] : kAbsent, on.transfer ? genome[2] : kAbsent};
}

double constraint_violation(const ProblemInstance& problem, const JoinedTriple& triple,
                            const PricedBundle& priced, const PenaltyConfig& penalties) {
  const auto& cs = problem.candidates;
  std::vector<const Candidate*> parts;
  if (triple.compute != kAbsent) parts.push_back(&cs.compute[triple.compute]);
  if (triple.storage != kAbsent) parts.push_back(&cs.storage[triple.storage]);
  if (triple.transfer != kAbsent) parts.push_back(&cs.transfer[triple.transfer]);

  double violation = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      if (!compatible(*parts[i], *parts[j], problem.policy)) violation += penalties.compatibility_scale;

  if (penalties.budget_cap)
    violation += penalties.budget_scale * std::max(0.0, priced.cost.total - *penalties.budget_cap);

  if (penalties.deadline_hours && priced.bundle.compute_id) {
    const ComputeOffer* c = problem.catalog.find_compute(*priced.bundle.compute_id);
    const double vms = std::max(1, problem.spec.usage.vm_count);
    const double runtime = penalties.workload_hours / (c->relative_speed * vms);
    violation += penalties.deadline_scale * std::max(0.0, runtime - *penalties.deadline_hours);
  }

  if (penalties.required_continent) {
    for (const auto* part : parts)
      if (problem.catalog.regions()[part->region].continent != *penalties.required_continent)
        violation += penalties.continent_scale;
  }
  return violation;
}

void repair_genome(const CandidateSets& candidates, CompatibilityPolicy policy, Genome& genome) {
  if (policy == CompatibilityPolicy::None) return;
  const auto& on = candidates.components;
  const std::array<const std::vector<Candidate>*, 3> lists = {&candidates.compute, &candidates.storage,
                                                              &candidates.transfer};
  const std::array<bool, 3> enabled = {on.compute, on.storage, on.transfer};
  const Candidate* anchor = nullptr;
  for (std::size_t k = 0; k < 3; ++k) {
    if (!enabled[k]) continue;
    const auto& list = *lists[k];
    if (anchor) {
      for (std::size_t step = 0; step < list.size(); ++step) {
        const std::size_t i = (genome[k] + step) % list.size();
        if (compatible(*anchor, list[i], policy)) {
          genome[k] = i;
          break;
        }
      }
    }
    if (!anchor) anchor = &list[genome[k]];
  }
}

SearchSpace make_search_space(const ProblemInstance& problem, const std::vector<CriterionSpec>& objectives,
                              const PenaltyConfig& penalties) {
  const auto& cs = problem.candidates;
  const auto& on = cs.components;
  SearchSpace space;
  space.gene_sizes = {on.compute ? cs.compute.size() : 1, on.storage ? cs.storage.size() : 1,
                      on.transfer ? cs.transfer.size() : 1};
  space.evaluate = [&problem, objectives, penalties](const Genome& g) {
    const JoinedTriple triple = decode_genome(problem.candidates, g);
    PricedBundle priced = price_bundle(problem.catalog, make_bundle(problem.catalog, problem.candidates, triple),
                                       problem.spec, problem.popularity, problem.recommended_weight);
    Evaluation e;
    e.objectives = objective_vector(priced.bundle, objectives);
    e.violation = constraint_violation(problem, triple, priced, penalties);
    return e;
  };
  if (problem.policy != CompatibilityPolicy::None)
    space.repair = [&problem](Genome& g) { repair_genome(problem.candidates, problem.policy, g); };
  return space;
}

ParetoFront nsga2_run(const ProblemInstance& problem, const std::vector<CriterionSpec>& objectives,
                      const PenaltyConfig& penalties, const GAParams& params) {
  const auto& cs = problem.candidates;
  const auto& on = cs.components;
  if ((on.compute && cs.compute.empty()) || (on.storage && cs.storage.empty()) ||
      (on.transfer && cs.transfer.empty()) || (!on.compute && !on.storage && !on.transfer))
    throw bad_request("candidates", "no candidate offers match the requirements");
  if (objectives.empty()) throw bad_request("objectives", "at least one objective is required");
  penalties.validate();
  return nsga2(make_search_space(problem, objectives, penalties), params);
}

std::vector<Bundle> brute_force_pareto(const std::vector<Bundle>& bundles,
                                       const std::vector<CriterionSpec>& objectives) {
  if (bundles.size() > kBruteForceLimit)
    throw invariant_error(fmt::format("{} bundles exceed the exhaustive search limit of {}", bundles.size(),
                                      kBruteForceLimit));
  std::vector<std::vector<double>> vecs;
  vecs.reserve(bundles.size());
  for (const auto& b : bundles) vecs.push_back(objective_vector(b, objectives));

  std::vector<Bundle> out;
  for (std::size_t i = 0; i < bundles.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < bundles.size() && !dominated; ++j)
      dominated = j != i && pareto_dominates(vecs[j], vecs[i]);
    if (!dominated) out.push_back(bundles[i]);
  }
  return out;
}

}  // namespace cloudsel
