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

#ifndef CLOUDSEL_CATALOG_HPP
#define CLOUDSEL_CATALOG_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "cloudsel/errors.hpp"

namespace cloudsel {

inline constexpr double kUnbounded = std::numeric_limits<double>::infinity();

enum class Continent {
  NorthAmerica,
  SouthAmerica,
  Antarctica,
  Africa,
  Europe,
  Asia,
  Australia,
};

inline constexpr std::size_t kContinentCount = 7;

std::string_view to_string(Continent c) noexcept;
std::optional<Continent> parse_continent(std::string_view name) noexcept;
const std::vector<Continent>& all_continents();

struct Provider {
  std::string id;
  std::string name;
  std::string website;
};

struct Region {
  std::string id;
  std::string provider_id;
  std::string region_name;
  Continent continent = Continent::NorthAmerica;
  std::optional<std::string> country;
};

/// One graduated price band: usage in [lower, upper) is billed at unit_price.
struct PriceTier {
  double lower = 0.0;
  double upper = kUnbounded;
  double unit_price = 0.0;
};

struct ComputeOffer {
  std::string id;
  std::string region_id;
  std::string name;
  int cores = 1;
  int threads_per_core_or_vm = 1;
  double memory = 0.0;
  double local_storage = 0.0;
  std::string os_family;
  double hourly_rate = 0.0;
  double relative_speed = 1.0;
};

struct StorageOffer {
  std::string id;
  std::string region_id;
  std::string name;
  std::vector<PriceTier> tiers;  // per GB-month
  double free_quota = 0.0;
};

struct TransferOffer {
  std::string id;
  std::string region_id;
  std::string name;
  std::vector<PriceTier> inbound_tiers;
  std::vector<PriceTier> outbound_tiers;
  double inbound_free_quota = 0.0;
  double outbound_free_quota = 0.0;
};

enum class PromotionKind { PercentDiscount, FlatCredit };

struct Promotion {
  std::string offer_id;
  PromotionKind kind = PromotionKind::PercentDiscount;
  double value = 0.0;
  int valid_months = 1;
};

/// Exchange rates expressed as units of `code` per one unit of `base_code`.
/// Catalog prices are denominated in the base currency.
struct CurrencyTable {
  std::string base_code = "USD";
  std::map<std::string, double> rates{{"USD", 1.0}};

  bool contains(std::string_view code) const;
  double rate(std::string_view code) const;  // throws bad_request("currency")
};

/// The raw, not-yet-validated content of a catalog document.
struct CatalogData {
  std::vector<Provider> providers;
  std::vector<Region> regions;
  std::vector<ComputeOffer> compute_offers;
  std::vector<StorageOffer> storage_offers;
  std::vector<TransferOffer> transfer_offers;
  std::vector<Promotion> promotions;
  CurrencyTable currency_table;
};

/// Returns one record per violated invariant; empty iff the data is valid.
std::vector<Violation> validate_catalog(const CatalogData& data);

/// Tier-list contiguity and sign checks shared with the cost engine.
std::vector<std::string> check_tiers(std::span<const PriceTier> tiers);

/// Immutable, validated catalog with id lookups. Instances are only
/// produced by `load_catalog` / `Catalog::create` and never mutated.
class Catalog {
 public:
  static std::shared_ptr<const Catalog> create(CatalogData data);

  std::uint64_t snapshot_id() const noexcept { return snapshot_id_; }
  const CatalogData& data() const noexcept { return data_; }

  const std::vector<Provider>& providers() const noexcept { return data_.providers; }
  const std::vector<Region>& regions() const noexcept { return data_.regions; }
  const std::vector<ComputeOffer>& compute_offers() const noexcept { return data_.compute_offers; }
  const std::vector<StorageOffer>& storage_offers() const noexcept { return data_.storage_offers; }
  const std::vector<TransferOffer>& transfer_offers() const noexcept { return data_.transfer_offers; }
  const std::vector<Promotion>& promotions() const noexcept { return data_.promotions; }
  const CurrencyTable& currency_table() const noexcept { return data_.currency_table; }

  std::size_t offer_count() const noexcept {
    return data_.compute_offers.size() + data_.storage_offers.size() + data_.transfer_offers.size();
  }

  const Region& region(std::string_view id) const;
  const Provider& provider(std::string_view id) const;
  std::size_t region_index(std::string_view id) const;
  std::size_t provider_index(std::string_view id) const;
  std::size_t provider_index_of_region(std::size_t region_index) const {
    return region_provider_[region_index];
  }

  bool has_offer(std::string_view offer_id) const;
  /// Name of any offer kind, empty when unknown.
  std::string offer_name(std::string_view offer_id) const;

  const ComputeOffer* find_compute(std::string_view id) const;
  const StorageOffer* find_storage(std::string_view id) const;
  const TransferOffer* find_transfer(std::string_view id) const;

 private:
  explicit Catalog(CatalogData data);

  CatalogData data_;
  std::uint64_t snapshot_id_ = 0;
  std::unordered_map<std::string, std::size_t> region_index_;
  std::unordered_map<std::string, std::size_t> provider_index_;
  std::vector<std::size_t> region_provider_;
  std::unordered_map<std::string, std::size_t> compute_index_;
  std::unordered_map<std::string, std::size_t> storage_index_;
  std::unordered_map<std::string, std::size_t> transfer_index_;
};

using CatalogSnapshot = std::shared_ptr<const Catalog>;

/// Parses a catalog document without validating invariants.
CatalogData parse_catalog_document(std::string_view document);

/// Parses, validates and freezes a catalog document.
/// Throws parse_error or validation_error.
CatalogSnapshot load_catalog(std::string_view document);
CatalogSnapshot load_catalog_file(const std::string& path);

std::string read_text_file(const std::string& path);

/// Holds the current snapshot; replacement is an atomic swap. Readers keep
/// whatever snapshot they fetched alive for the duration of their query.
class CatalogStore {
 public:
  CatalogStore() = default;
  explicit CatalogStore(CatalogSnapshot initial) { replace(std::move(initial)); }

  CatalogSnapshot current() const;
  void replace(CatalogSnapshot next);

  /// True when the offer id appears in any snapshot this store has held.
  bool knows_offer(std::string_view offer_id) const;

 private:
  mutable std::mutex mutex_;
  CatalogSnapshot current_;
  std::unordered_set<std::string> known_offers_;
};

}  // namespace cloudsel

#endif  // CLOUDSEL_CATALOG_HPP
