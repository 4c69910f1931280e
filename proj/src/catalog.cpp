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

#include "cloudsel/catalog.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace cloudsel {

using nlohmann::json;

namespace {

constexpr std::array<std::string_view, kContinentCount> kContinentNames = {
    "North America", "South America", "Antarctica", "Africa", "Europe", "Asia", "Australia",
};

std::atomic<std::uint64_t> g_next_snapshot{1};

std::string_view kind_name(PromotionKind k) {
  return k == PromotionKind::PercentDiscount ? "percent_discount" : "flat_credit";
}

// --- document parsing -----------------------------------------------------

std::string where(std::string_view array, std::size_t i) {
  return fmt::format("{}[{}]", array, i);
}

const json& require(const json& obj, const char* key, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end()) throw parse_error(fmt::format("{}: missing field '{}'", ctx, key));
  return *it;
}

std::string get_string(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_string()) throw parse_error(fmt::format("{}.{}: expected string", ctx, key));
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& ctx) {
  if (!v.is_number()) throw parse_error(fmt::format("{}: expected number", ctx));
  return v.get<double>();
}

double get_number(const json& obj, const char* key, const std::string& ctx) {
  return get_number(require(obj, key, ctx), ctx + "." + key);
}

double get_number_or(const json& obj, const char* key, double fallback, const std::string& ctx) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return fallback;
  return get_number(*it, ctx + "." + key);
}

int get_int(const json& obj, const char* key, const std::string& ctx) {
  const json& v = require(obj, key, ctx);
  if (!v.is_number_integer()) throw parse_error(fmt::format("{}.{}: expected integer", ctx, key));
  return v.get<int>();
}

int get_int_or(const json& obj, const char* key, int fallback, const std::string& ctx) {
  if (!obj.contains(key)) return fallback;
  return get_int(obj, key, ctx);
}

const json& get_array(const json& root, const char* key) {
  static const json empty = json::array();
  auto it = root.find(key);
  if (it == root.end()) return empty;
  if (!it->is_array()) throw parse_error(fmt::format("'{}' must be an array", key));
  return *it;
}

std::vector<PriceTier> parse_tiers(const json& obj, const char* key, const std::string& ctx) {
  std::vector<PriceTier> tiers;
  auto it = obj.find(key);
  if (it == obj.end()) throw parse_error(fmt::format("{}.{}: missing", ctx, key));
  if (!it->is_array()) throw parse_error(fmt::format("{}.{}: expected array", ctx, key));
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& t = (*it)[i];
    const std::string tctx = fmt::format("{}.{}[{}]", ctx, key, i);
    if (!t.is_object()) throw parse_error(tctx + ": expected object");
    PriceTier tier;
    tier.lower = get_number(t, "lower", tctx);
    tier.upper = get_number_or(t, "upper", kUnbounded, tctx);
    tier.unit_price = get_number(t, "unit_price", tctx);
    tiers.push_back(tier);
  }
  return tiers;
}

// --- validation helpers -----------------------------------------------------

bool is_currency_code(std::string_view code) {
  return code.size() == 3 &&
         std::all_of(code.begin(), code.end(), [](char c) { return c >= 'A' && c <= 'Z'; });
}

template <typename T>
void check_unique_ids(const std::vector<T>& items, std::string_view array,
                      std::set<std::string>& seen, std::vector<Violation>& out) {
  for (const auto& item : items) {
    if (item.id.empty()) {
      out.push_back({std::string(array) + "[]", "id", "must be non-empty"});
    } else if (!seen.insert(item.id).second) {
      out.push_back({fmt::format("{}[{}]", array, item.id), "id", "duplicate id"});
    }
  }
}

void check_region_ref(const std::string& entity, const std::string& region_id,
                      const std::set<std::string>& regions, std::vector<Violation>& out) {
  if (!regions.count(region_id))
    out.push_back({entity, "region_id", fmt::format("unknown region '{}'", region_id)});
}

void check_tier_field(const std::string& entity, const char* field,
                      const std::vector<PriceTier>& tiers, std::vector<Violation>& out) {
  for (auto& rule : check_tiers(tiers)) out.push_back({entity, field, std::move(rule)});
}

}  // namespace

std::string_view to_string(Continent c) noexcept {
  return kContinentNames[static_cast<std::size_t>(c)];
}

std::optional<Continent> parse_continent(std::string_view name) noexcept {
  for (std::size_t i = 0; i < kContinentNames.size(); ++i)
    if (kContinentNames[i] == name) return static_cast<Continent>(i);
  return std::nullopt;
}

const std::vector<Continent>& all_continents() {
  static const std::vector<Continent> all = {
      Continent::NorthAmerica, Continent::SouthAmerica, Continent::Antarctica, Continent::Africa,
      Continent::Europe,       Continent::Asia,         Continent::Australia,
  };
  return all;
}

bool CurrencyTable::contains(std::string_view code) const {
  return rates.find(std::string(code)) != rates.end();
}

double CurrencyTable::rate(std::string_view code) const {
  auto it = rates.find(std::string(code));
  if (it == rates.end())
    throw bad_request("currency", fmt::format("unknown currency code '{}'", code));
  return it->second;
}

std::vector<std::string> check_tiers(std::span<const PriceTier> tiers) {
  std::vector<std::string> problems;
  for (const auto& t : tiers) {
    if (!(t.lower < t.upper))
      problems.push_back(fmt::format("tier lower {} must be below upper {}", t.lower, t.upper));
    if (!(t.unit_price >= 0.0))
      problems.push_back(fmt::format("tier unit_price {} must be non-negative", t.unit_price));
  }
  auto by_lower = [](const PriceTier& a, const PriceTier& b) { return a.lower < b.lower; };
  std::vector<PriceTier> copy;
  if (!std::is_sorted(tiers.begin(), tiers.end(), by_lower)) {
    copy.assign(tiers.begin(), tiers.end());
    std::sort(copy.begin(), copy.end(), by_lower);
    tiers = copy;
  }
  for (std::size_t i = 0; i < tiers.size(); ++i) {
    const double expected = i == 0 ? 0.0 : tiers[i - 1].upper;
    if (tiers[i].lower != expected) {
      problems.push_back(i == 0 ? fmt::format("tiers must start at 0, first lower is {}", tiers[i].lower)
                                : fmt::format("tiers not contiguous: gap or overlap between {} and {}",
                                              expected, tiers[i].lower));
    }
  }
  return problems;
}

std::vector<Violation> validate_catalog(const CatalogData& data) {
  std::vector<Violation> out;

  std::set<std::string> provider_ids;
  check_unique_ids(data.providers, "providers", provider_ids, out);
  for (const auto& p : data.providers)
    if (p.website.empty()) out.push_back({"providers[" + p.id + "]", "website", "must be non-empty"});

  std::set<std::string> region_ids;
  check_unique_ids(data.regions, "regions", region_ids, out);
  for (const auto& r : data.regions) {
    const std::string e = "regions[" + r.id + "]";
    if (r.region_name.empty()) out.push_back({e, "region_name", "must be non-empty"});
    if (!provider_ids.count(r.provider_id))
      out.push_back({e, "provider_id", fmt::format("unknown provider '{}'", r.provider_id)});
  }

  // Offer ids share one namespace because promotions and history refer to
  // offers without naming their kind.
  std::set<std::string> offer_ids;
  check_unique_ids(data.compute_offers, "compute_offers", offer_ids, out);
  check_unique_ids(data.storage_offers, "storage_offers", offer_ids, out);
  check_unique_ids(data.transfer_offers, "transfer_offers", offer_ids, out);

  for (const auto& c : data.compute_offers) {
    const std::string e = "compute_offers[" + c.id + "]";
    check_region_ref(e, c.region_id, region_ids, out);
    if (c.cores < 1) out.push_back({e, "cores", "must be at least 1"});
    if (c.threads_per_core_or_vm < 1) out.push_back({e, "threads_per_core_or_vm", "must be at least 1"});
    if (!(c.memory >= 0.0)) out.push_back({e, "memory", "must be non-negative"});
    if (!(c.local_storage >= 0.0)) out.push_back({e, "local_storage", "must be non-negative"});
    if (!(c.hourly_rate >= 0.0)) out.push_back({e, "hourly_rate", "must be non-negative"});
    if (!(c.relative_speed > 0.0)) out.push_back({e, "relative_speed", "must be positive"});
  }
  for (const auto& s : data.storage_offers) {
    const std::string e = "storage_offers[" + s.id + "]";
    check_region_ref(e, s.region_id, region_ids, out);
    check_tier_field(e, "tiers", s.tiers, out);
    if (!(s.free_quota >= 0.0)) out.push_back({e, "free_quota", "must be non-negative"});
  }
  for (const auto& t : data.transfer_offers) {
    const std::string e = "transfer_offers[" + t.id + "]";
    check_region_ref(e, t.region_id, region_ids, out);
    check_tier_field(e, "inbound_tiers", t.inbound_tiers, out);
    check_tier_field(e, "outbound_tiers", t.outbound_tiers, out);
    if (!(t.inbound_free_quota >= 0.0)) out.push_back({e, "inbound_free_quota", "must be non-negative"});
    if (!(t.outbound_free_quota >= 0.0)) out.push_back({e, "outbound_free_quota", "must be non-negative"});
  }

  for (std::size_t i = 0; i < data.promotions.size(); ++i) {
    const auto& p = data.promotions[i];
    const std::string e = where("promotions", i);
    if (!offer_ids.count(p.offer_id))
      out.push_back({e, "offer_id", fmt::format("unknown offer '{}'", p.offer_id)});
    if (p.kind == PromotionKind::PercentDiscount && !(p.value > 0.0 && p.value <= 100.0))
      out.push_back({e, "value", "percent must lie in (0, 100]"});
    if (p.kind == PromotionKind::FlatCredit && !(p.value >= 0.0))
      out.push_back({e, "value", "credit must be non-negative"});
    if (p.valid_months < 0) out.push_back({e, "valid_months", "must be non-negative"});
  }

  const auto& ct = data.currency_table;
  if (!is_currency_code(ct.base_code))
    out.push_back({"currency_table", "base_code", "must be a 3-letter code"});
  for (const auto& [code, rate] : ct.rates) {
    if (!is_currency_code(code))
      out.push_back({"currency_table", "rates", fmt::format("'{}' is not a 3-letter code", code)});
    if (!(rate > 0.0))
      out.push_back({"currency_table", "rates", fmt::format("rate for {} must be positive", code)});
  }
  auto base = ct.rates.find(ct.base_code);
  if (base == ct.rates.end() || base->second != 1.0)
    out.push_back({"currency_table", "rates", "base currency must map to 1.0"});

  return out;
}

CatalogData parse_catalog_document(std::string_view document) {
  json root;
  try {
    root = json::parse(document);
  } catch (const json::parse_error& e) {
    throw parse_error(fmt::format("catalog is not well-formed: {}", e.what()));
  }
  if (!root.is_object()) throw parse_error("catalog document must be an object");

  CatalogData data;
  const json& providers = get_array(root, "providers");
  for (std::size_t i = 0; i < providers.size(); ++i) {
    const std::string ctx = where("providers", i);
    const json& p = providers[i];
    data.providers.push_back({get_string(p, "id", ctx), get_string(p, "name", ctx),
                              get_string(p, "website", ctx)});
  }

  const json& regions = get_array(root, "regions");
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::string ctx = where("regions", i);
    const json& r = regions[i];
    Region region;
    region.id = get_string(r, "id", ctx);
    region.provider_id = get_string(r, "provider_id", ctx);
    region.region_name = get_string(r, "region_name", ctx);
    const std::string continent = get_string(r, "continent", ctx);
    auto parsed = parse_continent(continent);
    if (!parsed) throw parse_error(fmt::format("{}.continent: unknown continent '{}'", ctx, continent));
    region.continent = *parsed;
    if (r.contains("country") && !r["country"].is_null()) region.country = get_string(r, "country", ctx);
    data.regions.push_back(std::move(region));
  }

  const json& compute = get_array(root, "compute_offers");
  for (std::size_t i = 0; i < compute.size(); ++i) {
    const std::string ctx = where("compute_offers", i);
    const json& c = compute[i];
    ComputeOffer o;
    o.id = get_string(c, "id", ctx);
    o.region_id = get_string(c, "region_id", ctx);
    o.name = get_string(c, "name", ctx);
    o.cores = get_int(c, "cores", ctx);
    o.threads_per_core_or_vm = get_int_or(c, "threads_per_core_or_vm", 1, ctx);
    o.memory = get_number(c, "memory", ctx);
    o.local_storage = get_number_or(c, "local_storage", 0.0, ctx);
    o.os_family = get_string(c, "os_family", ctx);
    o.hourly_rate = get_number(c, "hourly_rate", ctx);
    o.relative_speed = get_number_or(c, "relative_speed", 1.0, ctx);
    data.compute_offers.push_back(std::move(o));
  }

  const json& storage = get_array(root, "storage_offers");
  for (std::size_t i = 0; i < storage.size(); ++i) {
    const std::string ctx = where("storage_offers", i);
    const json& s = storage[i];
    StorageOffer o;
    o.id = get_string(s, "id", ctx);
    o.region_id = get_string(s, "region_id", ctx);
    o.name = get_string(s, "name", ctx);
    o.tiers = parse_tiers(s, "tiers", ctx);
    o.free_quota = get_number_or(s, "free_quota", 0.0, ctx);
    data.storage_offers.push_back(std::move(o));
  }

  const json& transfer = get_array(root, "transfer_offers");
  for (std::size_t i = 0; i < transfer.size(); ++i) {
    const std::string ctx = where("transfer_offers", i);
    const json& t = transfer[i];
    TransferOffer o;
    o.id = get_string(t, "id", ctx);
    o.region_id = get_string(t, "region_id", ctx);
    o.name = get_string(t, "name", ctx);
    o.inbound_tiers = parse_tiers(t, "inbound_tiers", ctx);
    o.outbound_tiers = parse_tiers(t, "outbound_tiers", ctx);
    o.inbound_free_quota = get_number_or(t, "inbound_free_quota", 0.0, ctx);
    o.outbound_free_quota = get_number_or(t, "outbound_free_quota", 0.0, ctx);
    data.transfer_offers.push_back(std::move(o));
  }

  const json& promotions = get_array(root, "promotions");
  for (std::size_t i = 0; i < promotions.size(); ++i) {
    const std::string ctx = where("promotions", i);
    const json& p = promotions[i];
    Promotion promo;
    promo.offer_id = get_string(p, "offer_id", ctx);
    const std::string kind = get_string(p, "kind", ctx);
    if (kind == kind_name(PromotionKind::PercentDiscount)) {
      promo.kind = PromotionKind::PercentDiscount;
    } else if (kind == kind_name(PromotionKind::FlatCredit)) {
      promo.kind = PromotionKind::FlatCredit;
    } else {
      throw parse_error(fmt::format("{}.kind: unknown promotion kind '{}'", ctx, kind));
    }
    promo.value = get_number(p, "value", ctx);
    promo.valid_months = get_int_or(p, "valid_months", 1, ctx);
    data.promotions.push_back(std::move(promo));
  }

  if (auto it = root.find("currency_table"); it != root.end()) {
    if (!it->is_object()) throw parse_error("'currency_table' must be an object");
    CurrencyTable table;
    table.base_code = get_string(*it, "base_code", "currency_table");
    table.rates.clear();
    const json& rates = require(*it, "rates", "currency_table");
    if (!rates.is_object()) throw parse_error("currency_table.rates: expected object");
    for (const auto& [code, rate] : rates.items())
      table.rates[code] = get_number(rate, "currency_table.rates." + code);
    data.currency_table = std::move(table);
  }
  return data;
}

Catalog::Catalog(CatalogData data)
    : data_(std::move(data)), snapshot_id_(g_next_snapshot.fetch_add(1)) {
  for (std::size_t i = 0; i < data_.providers.size(); ++i) provider_index_.emplace(data_.providers[i].id, i);
  for (std::size_t i = 0; i < data_.regions.size(); ++i) {
    region_index_.emplace(data_.regions[i].id, i);
    region_provider_.push_back(provider_index_.at(data_.regions[i].provider_id));
  }
  for (std::size_t i = 0; i < data_.compute_offers.size(); ++i) compute_index_.emplace(data_.compute_offers[i].id, i);
  for (std::size_t i = 0; i < data_.storage_offers.size(); ++i) storage_index_.emplace(data_.storage_offers[i].id, i);
  for (std::size_t i = 0; i < data_.transfer_offers.size(); ++i) transfer_index_.emplace(data_.transfer_offers[i].id, i);
}

std::shared_ptr<const Catalog> Catalog::create(CatalogData data) {
  auto violations = validate_catalog(data);
  if (!violations.empty()) throw validation_error(std::move(violations));
  return std::shared_ptr<const Catalog>(new Catalog(std::move(data)));
}

std::size_t Catalog::region_index(std::string_view id) const {
  auto it = region_index_.find(std::string(id));
  if (it == region_index_.end()) throw invariant_error(fmt::format("unknown region '{}'", id));
  return it->second;
}

std::size_t Catalog::provider_index(std::string_view id) const {
  auto it = provider_index_.find(std::string(id));
  if (it == provider_index_.end()) throw invariant_error(fmt::format("unknown provider '{}'", id));
  return it->second;
}

const Region& Catalog::region(std::string_view id) const { return data_.regions[region_index(id)]; }

const Provider& Catalog::provider(std::string_view id) const {
  return data_.providers[provider_index(id)];
}

const ComputeOffer* Catalog::find_compute(std::string_view id) const {
  auto it = compute_index_.find(std::string(id));
  return it == compute_index_.end() ? nullptr : &data_.compute_offers[it->second];
}

const StorageOffer* Catalog::find_storage(std::string_view id) const {
  auto it = storage_index_.find(std::string(id));
  return it == storage_index_.end() ? nullptr : &data_.storage_offers[it->second];
}

const TransferOffer* Catalog::find_transfer(std::string_view id) const {
  auto it = transfer_index_.find(std::string(id));
  return it == transfer_index_.end() ? nullptr : &data_.transfer_offers[it->second];
}

bool Catalog::has_offer(std::string_view offer_id) const {
  return find_compute(offer_id) || find_storage(offer_id) || find_transfer(offer_id);
}

std::string Catalog::offer_name(std::string_view offer_id) const {
  if (auto* c = find_compute(offer_id)) return c->name;
  if (auto* s = find_storage(offer_id)) return s->name;
  if (auto* t = find_transfer(offer_id)) return t->name;
  return {};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw parse_error(fmt::format("cannot open '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

CatalogSnapshot load_catalog(std::string_view document) {
  return Catalog::create(parse_catalog_document(document));
}

CatalogSnapshot load_catalog_file(const std::string& path) { return load_catalog(read_text_file(path)); }

CatalogSnapshot CatalogStore::current() const {
  std::lock_guard lock(mutex_);
  return current_;
}

void CatalogStore::replace(CatalogSnapshot next) {
  std::lock_guard lock(mutex_);
  if (next) {
    for (const auto& c : next->compute_offers()) known_offers_.insert(c.id);
    for (const auto& s : next->storage_offers()) known_offers_.insert(s.id);
    for (const auto& t : next->transfer_offers()) known_offers_.insert(t.id);
  }
  current_ = std::move(next);
}

bool CatalogStore::knows_offer(std::string_view offer_id) const {
  std::lock_guard lock(mutex_);
  return known_offers_.count(std::string(offer_id)) > 0;
}

}  // namespace cloudsel
