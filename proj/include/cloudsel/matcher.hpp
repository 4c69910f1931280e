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

#ifndef CLOUDSEL_MATCHER_HPP
#define CLOUDSEL_MATCHER_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cloudsel/bundle.hpp"
#include "cloudsel/catalog.hpp"
#include "cloudsel/cost_engine.hpp"

namespace cloudsel {

// --- requirements -----------------------------------------------------------

enum class VagueLevel { Small, Medium, Large };
enum class Dimension { Storage, Compute, Traffic };

std::string_view to_string(VagueLevel level) noexcept;
std::string_view to_string(Dimension dim) noexcept;
std::optional<VagueLevel> parse_vague_level(std::string_view text) noexcept;
std::optional<Dimension> parse_dimension(std::string_view text) noexcept;

/// Numeric meaning of small/medium/large per dimension. Storage and traffic
/// are GB (traffic applies to upload and download separately), compute is a
/// VM count.
struct VagueMapping {
  std::array<double, 3> storage{100.0, 1000.0, 10000.0};
  std::array<double, 3> compute{1.0, 4.0, 16.0};
  std::array<double, 3> traffic{10.0, 100.0, 1000.0};

  double value(Dimension dim, VagueLevel level) const;
};

enum class Direction { Minimize, Maximize };
enum class CriterionKind { Quantitative, Qualitative };

enum class Criterion { TotalCost, CostPerWorkload, RelativeSpeed, Memory, RegionMatch, Popularity };

std::string_view to_string(Criterion c) noexcept;
std::string_view to_string(Direction d) noexcept;
std::optional<Criterion> parse_criterion(std::string_view name) noexcept;
std::optional<Direction> parse_direction(std::string_view text) noexcept;
const std::vector<Criterion>& all_criteria();

struct CriterionSpec {
  Criterion criterion = Criterion::TotalCost;
  Direction direction = Direction::Minimize;
  CriterionKind kind = CriterionKind::Quantitative;

  std::string name() const { return std::string(to_string(criterion)); }

  /// Spec with the criterion's natural direction (costs minimized, the rest maximized).
  static CriterionSpec natural(Criterion c);
};

/// Maps a raw value onto the minimization convention.
inline double as_minimized(double value, Direction d) { return d == Direction::Minimize ? value : -value; }

struct ComponentSelection {
  bool compute = true;
  bool storage = true;
  bool transfer = true;
};

/// Usage as the user stated it: a quantity may be left out when a vague
/// level covers its dimension.
struct UsageRequest {
  std::optional<double> storage;
  std::optional<double> data_upload;
  std::optional<double> data_download;
  std::optional<int> vm_count;
  int duration_days = kDaysPerBillingMonth;
  double vm_hours_per_day = 24.0;
};

struct RequirementSpec {
  UsageRequest usage;
  std::vector<Continent> continents;  // empty means any
  std::optional<std::string> os_family;
  int min_cores = 0;
  double min_memory = 0.0;
  std::map<Dimension, VagueLevel> vague_levels;
  std::string currency = "USD";
  std::vector<CriterionSpec> criteria;
  ComponentSelection components;
};

/// A requirement with every quantity numeric.
struct ResolvedRequirements {
  UsageVector usage;
  std::vector<Continent> continents;
  std::optional<std::string> os_family;
  int min_cores = 0;
  double min_memory = 0.0;
  std::string currency = "USD";
  std::vector<CriterionSpec> criteria;
  ComponentSelection components;
};

/// Replaces vague levels with mapped values; exact quantities win. Quantities
/// of deselected components default to zero. Throws bad_request.
ResolvedRequirements resolve_requirements(const RequirementSpec& spec, const VagueMapping& mapping);

// --- candidates and join ----------------------------------------------------

struct Candidate {
  std::size_t offer;     // index into the catalog's offer array of that kind
  std::size_t region;    // catalog region index
  std::size_t provider;  // catalog provider index
};

struct CandidateSets {
  std::vector<Candidate> compute;
  std::vector<Candidate> storage;
  std::vector<Candidate> transfer;
  ComponentSelection components;
};

CandidateSets filter_candidates(const Catalog& catalog, const ResolvedRequirements& spec);

enum class CompatibilityPolicy { SameRegion, SameProvider, None };

std::string_view to_string(CompatibilityPolicy p) noexcept;
std::optional<CompatibilityPolicy> parse_policy(std::string_view text) noexcept;

/// Whether two candidates may appear in one bundle under `policy`.
bool compatible(const Candidate& a, const Candidate& b, CompatibilityPolicy policy) noexcept;

inline constexpr std::size_t kAbsent = static_cast<std::size_t>(-1);

/// Positions into CandidateSets' vectors; kAbsent for deselected components.
struct JoinedTriple {
  std::size_t compute = kAbsent;
  std::size_t storage = kAbsent;
  std::size_t transfer = kAbsent;

  friend auto operator<=>(const JoinedTriple&, const JoinedTriple&) = default;
};

struct JoinStats {
  std::size_t key_probes = 0;  // hash-table inserts plus lookups
};

/// Hash join of the enabled candidate lists on the policy's key. Output is
/// ordered by (compute, storage, transfer) position.
std::vector<JoinedTriple> join_candidates(const CandidateSets& candidates, CompatibilityPolicy policy,
                                          JoinStats* stats = nullptr);

Bundle make_bundle(const Catalog& catalog, const CandidateSets& candidates, const JoinedTriple& triple);

std::vector<Bundle> bundle_join(const Catalog& catalog, const CandidateSets& candidates,
                                CompatibilityPolicy policy, JoinStats* stats = nullptr);

// --- criteria ---------------------------------------------------------------

struct OfferPopularity {
  long long recommended = 0;
  long long selected = 0;

  friend bool operator==(const OfferPopularity&, const OfferPopularity&) = default;
};

using PopularityStats = std::map<std::string, OfferPopularity, std::less<>>;

struct PricedBundle {
  Bundle bundle;
  CostBreakdown cost;
};

/// Prices a bundle and fills `criteria_values` for every known criterion.
/// `popularity` may be null (all zero).
PricedBundle price_bundle(const Catalog& catalog, Bundle bundle, const ResolvedRequirements& spec,
                          const PopularityStats* popularity = nullptr,
                          double recommended_weight = 0.1);

/// Orders by total ascending, then bundle key.
void sort_by_total(std::vector<PricedBundle>& priced);

/// Removes exactly the strictly dominated bundles; ties are all kept.
/// Throws invariant_error when a bundle lacks an objective value.
std::vector<Bundle> prune_dominated(const std::vector<Bundle>& bundles,
                                    const std::vector<CriterionSpec>& objectives);

/// Objective vector of a bundle in the minimization convention.
std::vector<double> objective_vector(const Bundle& bundle, const std::vector<CriterionSpec>& objectives);

}  // namespace cloudsel

#endif  // CLOUDSEL_MATCHER_HPP
