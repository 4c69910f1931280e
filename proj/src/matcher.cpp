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

#include "cloudsel/matcher.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <unordered_map>

#include <fmt/format.h>

namespace cloudsel {

namespace {

constexpr std::array<std::string_view, 3> kLevelNames = {"small", "medium", "large"};
constexpr std::array<std::string_view, 3> kDimensionNames = {"storage", "compute", "traffic"};
constexpr std::array<std::string_view, 6> kCriterionNames = {
    "total_cost", "cost_per_workload", "relative_speed", "memory", "region_match", "popularity",
};
constexpr std::array<std::string_view, 3> kPolicyNames = {"same-region", "same-provider", "none"};

template <typename Enum, std::size_t N>
std::optional<Enum> lookup(const std::array<std::string_view, N>& names, std::string_view text) {
  for (std::size_t i = 0; i < N; ++i)
    if (names[i] == text) return static_cast<Enum>(i);
  return std::nullopt;
}

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

std::size_t join_key(const Candidate& c, CompatibilityPolicy policy) {
  switch (policy) {
    case CompatibilityPolicy::SameRegion: return c.region;
    case CompatibilityPolicy::SameProvider: return c.provider;
    case CompatibilityPolicy::None: return 0;
  }
  return 0;
}

using Buckets = std::unordered_map<std::size_t, std::vector<std::size_t>>;

Buckets build(const std::vector<Candidate>& side, CompatibilityPolicy policy, JoinStats& stats) {
  Buckets buckets;
  for (std::size_t i = 0; i < side.size(); ++i) {
    buckets[join_key(side[i], policy)].push_back(i);
    ++stats.key_probes;
  }
  return buckets;
}

const std::vector<std::size_t>* probe(const Buckets& buckets, std::size_t key, JoinStats& stats) {
  ++stats.key_probes;
  auto it = buckets.find(key);
  return it == buckets.end() ? nullptr : &it->second;
}

}  // namespace

std::string_view to_string(VagueLevel level) noexcept { return kLevelNames[static_cast<std::size_t>(level)]; }
std::string_view to_string(Dimension dim) noexcept { return kDimensionNames[static_cast<std::size_t>(dim)]; }
std::string_view to_string(Criterion c) noexcept { return kCriterionNames[static_cast<std::size_t>(c)]; }
std::string_view to_string(Direction d) noexcept { return d == Direction::Minimize ? "min" : "max"; }
std::string_view to_string(CompatibilityPolicy p) noexcept { return kPolicyNames[static_cast<std::size_t>(p)]; }

std::optional<VagueLevel> parse_vague_level(std::string_view text) noexcept {
  return lookup<VagueLevel>(kLevelNames, text);
}
std::optional<Dimension> parse_dimension(std::string_view text) noexcept {
  return lookup<Dimension>(kDimensionNames, text);
}
std::optional<Criterion> parse_criterion(std::string_view name) noexcept {
  return lookup<Criterion>(kCriterionNames, name);
}
std::optional<CompatibilityPolicy> parse_policy(std::string_view text) noexcept {
  return lookup<CompatibilityPolicy>(kPolicyNames, text);
}

std::optional<Direction> parse_direction(std::string_view text) noexcept {
  if (text == "min" || text == "minimize") return Direction::Minimize;
  if (text == "max" || text == "maximize") return Direction::Maximize;
  return std::nullopt;
}

const std::vector<Criterion>& all_criteria() {
  static const std::vector<Criterion> all = {Criterion::TotalCost,     Criterion::CostPerWorkload,
                                             Criterion::RelativeSpeed, Criterion::Memory,
                                             Criterion::RegionMatch,   Criterion::Popularity};
  return all;
}

CriterionSpec CriterionSpec::natural(Criterion c) {
  switch (c) {
    case Criterion::TotalCost:
    case Criterion::CostPerWorkload:
      return {c, Direction::Minimize, CriterionKind::Quantitative};
    case Criterion::RelativeSpeed:
    case Criterion::Memory:
      return {c, Direction::Maximize, CriterionKind::Quantitative};
    case Criterion::RegionMatch:
    case Criterion::Popularity:
      return {c, Direction::Maximize, CriterionKind::Qualitative};
  }
  return {c, Direction::Minimize, CriterionKind::Quantitative};
}

double VagueMapping::value(Dimension dim, VagueLevel level) const {
  const auto i = static_cast<std::size_t>(level);
  switch (dim) {
    case Dimension::Storage: return storage[i];
    case Dimension::Compute: return compute[i];
    case Dimension::Traffic: return traffic[i];
  }
  return 0.0;
}

ResolvedRequirements resolve_requirements(const RequirementSpec& spec, const VagueMapping& mapping) {
  auto level_of = [&](Dimension d) -> std::optional<VagueLevel> {
    auto it = spec.vague_levels.find(d);
    if (it == spec.vague_levels.end()) return std::nullopt;
    return it->second;
  };
  auto quantity = [&](const std::optional<double>& exact, Dimension d, const char* param) {
    if (exact) return *exact;
    if (auto level = level_of(d)) return mapping.value(d, *level);
    throw bad_request(param, fmt::format("'{}' is required (give a value or a {} level)", param, to_string(d)));
  };

  ResolvedRequirements out;
  const auto& c = spec.components;
  out.usage.storage = c.storage ? quantity(spec.usage.storage, Dimension::Storage, "storage") : 0.0;
  out.usage.data_upload =
      c.transfer ? quantity(spec.usage.data_upload, Dimension::Traffic, "data_upload_size") : 0.0;
  out.usage.data_download =
      c.transfer ? quantity(spec.usage.data_download, Dimension::Traffic, "data_download_size") : 0.0;
  if (c.compute) {
    const std::optional<double> exact_vms =
        spec.usage.vm_count ? std::optional<double>(*spec.usage.vm_count) : std::nullopt;
    out.usage.vm_count = static_cast<int>(quantity(exact_vms, Dimension::Compute, "vm_count"));
  } else {
    out.usage.vm_count = 0;
  }
  out.usage.duration_days = spec.usage.duration_days;
  out.usage.vm_hours_per_day = spec.usage.vm_hours_per_day;
  validate_usage(out.usage);

  if (spec.min_cores < 0) throw bad_request("min_cores", "'min_cores' must be non-negative");
  if (!(spec.min_memory >= 0.0)) throw bad_request("min_memory", "'min_memory' must be non-negative");

  std::set<Criterion> seen;
  for (const auto& cs : spec.criteria)
    if (!seen.insert(cs.criterion).second)
      throw bad_request("criteria", fmt::format("criterion '{}' listed twice", to_string(cs.criterion)));

  out.continents = spec.continents;
  out.os_family = spec.os_family;
  out.min_cores = spec.min_cores;
  out.min_memory = spec.min_memory;
  out.currency = spec.currency;
  out.criteria = spec.criteria;
  out.components = spec.components;
  return out;
}

CandidateSets filter_candidates(const Catalog& catalog, const ResolvedRequirements& spec) {
  std::vector<bool> region_ok(catalog.regions().size(), true);
  if (!spec.continents.empty()) {
    for (std::size_t i = 0; i < region_ok.size(); ++i) {
      const Continent c = catalog.regions()[i].continent;
      region_ok[i] = std::find(spec.continents.begin(), spec.continents.end(), c) != spec.continents.end();
    }
  }

  CandidateSets out;
  out.components = spec.components;
  auto admit = [&](std::vector<Candidate>& side, std::size_t offer, const std::string& region_id) {
    const std::size_t r = catalog.region_index(region_id);
    if (region_ok[r]) side.push_back({offer, r, catalog.provider_index_of_region(r)});
  };

  if (spec.components.compute) {
    const auto& offers = catalog.compute_offers();
    for (std::size_t i = 0; i < offers.size(); ++i) {
      const auto& o = offers[i];
      if (o.cores < spec.min_cores || o.memory < spec.min_memory) continue;
      if (spec.os_family && !iequals(o.os_family, *spec.os_family)) continue;
      admit(out.compute, i, o.region_id);
    }
  }
  if (spec.components.storage) {
    const auto& offers = catalog.storage_offers();
    for (std::size_t i = 0; i < offers.size(); ++i) admit(out.storage, i, offers[i].region_id);
  }
  if (spec.components.transfer) {
    const auto& offers = catalog.transfer_offers();
    for (std::size_t i = 0; i < offers.size(); ++i) admit(out.transfer, i, offers[i].region_id);
  }
  return out;
}

bool compatible(const Candidate& a, const Candidate& b, CompatibilityPolicy policy) noexcept {
  return join_key(a, policy) == join_key(b, policy);
}

std::vector<JoinedTriple> join_candidates(const CandidateSets& candidates, CompatibilityPolicy policy,
                                          JoinStats* stats) {
  JoinStats local;
  JoinStats& st = stats ? *stats : local;
  const auto& on = candidates.components;
  std::vector<JoinedTriple> out;
  if (!on.compute && !on.storage && !on.transfer) return out;
  if ((on.compute && candidates.compute.empty()) || (on.storage && candidates.storage.empty()) ||
      (on.transfer && candidates.transfer.empty()))
    return out;

  // The first enabled side drives the probe loop; the others are hashed.
  const Buckets storage = on.compute && on.storage ? build(candidates.storage, policy, st) : Buckets{};
  const Buckets transfer = (on.compute || on.storage) && on.transfer ? build(candidates.transfer, policy, st)
                                                                     : Buckets{};
  static const std::vector<std::size_t> kNone = {kAbsent};

  if (on.compute) {
    for (std::size_t c = 0; c < candidates.compute.size(); ++c) {
      const std::size_t key = join_key(candidates.compute[c], policy);
      const auto* ss = on.storage ? probe(storage, key, st) : &kNone;
      if (!ss) continue;
      const auto* ts = on.transfer ? probe(transfer, key, st) : &kNone;
      if (!ts) continue;
      for (std::size_t s : *ss)
        for (std::size_t t : *ts) out.push_back({c, s, t});
    }
  } else if (on.storage) {
    for (std::size_t s = 0; s < candidates.storage.size(); ++s) {
      const auto* ts = on.transfer ? probe(transfer, join_key(candidates.storage[s], policy), st) : &kNone;
      if (!ts) continue;
      for (std::size_t t : *ts) out.push_back({kAbsent, s, t});
    }
  } else {
    for (std::size_t t = 0; t < candidates.transfer.size(); ++t) out.push_back({kAbsent, kAbsent, t});
  }
  return out;
}

Bundle make_bundle(const Catalog& catalog, const CandidateSets& candidates, const JoinedTriple& triple) {
  Bundle b;
  if (triple.compute != kAbsent) {
    const auto& offer = catalog.compute_offers()[candidates.compute[triple.compute].offer];
    b.compute_id = offer.id;
    b.region_ids.push_back(offer.region_id);
  }
  if (triple.storage != kAbsent) {
    const auto& offer = catalog.storage_offers()[candidates.storage[triple.storage].offer];
    b.storage_id = offer.id;
    b.region_ids.push_back(offer.region_id);
  }
  if (triple.transfer != kAbsent) {
    const auto& offer = catalog.transfer_offers()[candidates.transfer[triple.transfer].offer];
    b.transfer_id = offer.id;
    b.region_ids.push_back(offer.region_id);
  }
  return b;
}

std::vector<Bundle> bundle_join(const Catalog& catalog, const CandidateSets& candidates,
                                CompatibilityPolicy policy, JoinStats* stats) {
  std::vector<Bundle> out;
  for (const auto& triple : join_candidates(candidates, policy, stats))
    out.push_back(make_bundle(catalog, candidates, triple));
  return out;
}

PricedBundle price_bundle(const Catalog& catalog, Bundle bundle, const ResolvedRequirements& spec,
                          const PopularityStats* popularity, double recommended_weight) {
  PricedBundle out{std::move(bundle), {}};
  out.cost = bundle_cost(catalog, out.bundle, spec.usage, spec.currency);

  double speed = 1.0;
  double memory = 0.0;
  if (out.bundle.compute_id) {
    const ComputeOffer* c = catalog.find_compute(*out.bundle.compute_id);
    speed = c->relative_speed;
    memory = c->memory;
  }
  const auto& regions = out.bundle.region_ids;
  const bool one_region =
      std::adjacent_find(regions.begin(), regions.end(), std::not_equal_to<>()) == regions.end();

  double pop = 0.0;
  if (popularity) {
    for (const auto& id : out.bundle.offer_ids()) {
      auto it = popularity->find(id);
      if (it != popularity->end())
        pop += static_cast<double>(it->second.selected) +
               recommended_weight * static_cast<double>(it->second.recommended);
    }
  }

  auto& v = out.bundle.criteria_values;
  v[std::string(to_string(Criterion::TotalCost))] = out.cost.total;
  v[std::string(to_string(Criterion::CostPerWorkload))] = out.cost.total / speed;
  v[std::string(to_string(Criterion::RelativeSpeed))] = speed;
  v[std::string(to_string(Criterion::Memory))] = memory;
  v[std::string(to_string(Criterion::RegionMatch))] = one_region ? 1.0 : 0.0;
  v[std::string(to_string(Criterion::Popularity))] = pop;
  return out;
}

void sort_by_total(std::vector<PricedBundle>& priced) {
  std::stable_sort(priced.begin(), priced.end(), [](const PricedBundle& a, const PricedBundle& b) {
    if (a.cost.total != b.cost.total) return a.cost.total < b.cost.total;
    return a.bundle.key() < b.bundle.key();
  });
}

std::vector<double> objective_vector(const Bundle& bundle, const std::vector<CriterionSpec>& objectives) {
  std::vector<double> out;
  out.reserve(objectives.size());
  for (const auto& o : objectives) {
    auto it = bundle.criteria_values.find(o.name());
    if (it == bundle.criteria_values.end())
      throw invariant_error(fmt::format("bundle {} has no value for '{}'", bundle.key(), o.name()));
    out.push_back(as_minimized(it->second, o.direction));
  }
  return out;
}

std::vector<Bundle> prune_dominated(const std::vector<Bundle>& bundles,
                                    const std::vector<CriterionSpec>& objectives) {
  std::vector<std::vector<double>> vecs;
  vecs.reserve(bundles.size());
  for (const auto& b : bundles) vecs.push_back(objective_vector(b, objectives));

  // Any strict dominator sorts lexicographically before the bundle it
  // dominates, and dominance is transitive, so comparing against the
  // survivors seen so far is enough.
  std::vector<std::size_t> order(bundles.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vecs[a] < vecs[b]; });

  auto dominates = [&](const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] > b[k]) return false;
      if (a[k] < b[k]) strictly = true;
    }
    return strictly;
  };

  std::vector<std::size_t> kept;
  for (std::size_t i : order) {
    const bool dominated =
        std::any_of(kept.begin(), kept.end(), [&](std::size_t k) { return dominates(vecs[k], vecs[i]); });
    if (!dominated) kept.push_back(i);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<Bundle> out;
  out.reserve(kept.size());
  for (std::size_t i : kept) out.push_back(bundles[i]);
  return out;
}

}  // namespace cloudsel
