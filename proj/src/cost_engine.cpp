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

#include "cloudsel/cost_engine.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

namespace cloudsel {

namespace {

bool sorted_by_lower(std::span<const PriceTier> tiers) {
  return std::is_sorted(tiers.begin(), tiers.end(),
                        [](const PriceTier& a, const PriceTier& b) { return a.lower < b.lower; });
}

double graduated(double billable, std::span<const PriceTier> tiers) {
  double cost = 0.0;
  for (const auto& tier : tiers) {
    if (billable <= tier.lower) break;
    cost += (std::min(billable, tier.upper) - tier.lower) * tier.unit_price;
  }
  return cost;
}

}  // namespace

void validate_usage(const UsageVector& u) {
  auto non_negative = [](double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
      throw bad_request(name, fmt::format("'{}' must be a non-negative number", name));
  };
  non_negative(u.storage, "storage");
  non_negative(u.data_upload, "data_upload_size");
  non_negative(u.data_download, "data_download_size");
  if (u.duration_days < 1 || u.duration_days > kDaysPerBillingMonth)
    throw bad_request("duration", "'duration' must be an integer number of days in [1, 31]");
  if (u.vm_count < 0) throw bad_request("vm_count", "'vm_count' must be non-negative");
  if (!(u.vm_hours_per_day > 0.0 && u.vm_hours_per_day <= 24.0))
    throw bad_request("vm_hours_per_day", "'vm_hours_per_day' must lie in (0, 24]");
}

double tiered_cost(double usage, std::span<const PriceTier> tiers, double free_quota) {
  if (!(usage >= 0.0)) throw invariant_error(fmt::format("usage {} must be non-negative", usage));
  if (!(free_quota >= 0.0))
    throw invariant_error(fmt::format("free quota {} must be non-negative", free_quota));

  if (auto problems = check_tiers(tiers); !problems.empty()) throw invariant_error(problems.front());

  const double billable = std::max(0.0, usage - free_quota);
  if (billable == 0.0) return 0.0;
  if (sorted_by_lower(tiers)) return graduated(billable, tiers);

  std::vector<PriceTier> sorted(tiers.begin(), tiers.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const PriceTier& a, const PriceTier& b) { return a.lower < b.lower; });
  return graduated(billable, sorted);
}

double billed_hours(const UsageVector& usage) {
  const double hours = usage.duration_days * usage.vm_hours_per_day;
  // Absorb representation noise such as 3.0000000000000004 before rounding up.
  return std::ceil(hours - 1e-9);
}

double component_cost(const ComputeOffer& offer, const UsageVector& usage) {
  return offer.hourly_rate * usage.vm_count * billed_hours(usage);
}

double component_cost(const StorageOffer& offer, const UsageVector& usage) {
  return tiered_cost(usage.storage, offer.tiers, offer.free_quota) *
         (static_cast<double>(usage.duration_days) / kDaysPerBillingMonth);
}

double component_cost(const TransferOffer& offer, const UsageVector& usage) {
  return tiered_cost(usage.data_upload, offer.inbound_tiers, offer.inbound_free_quota) +
         tiered_cost(usage.data_download, offer.outbound_tiers, offer.outbound_free_quota);
}

double convert_currency(double amount, std::string_view from, std::string_view to,
                        const CurrencyTable& table) {
  const double from_rate = table.rate(from);
  const double to_rate = table.rate(to);
  if (from == to) return amount;
  return amount * to_rate / from_rate;
}

CostBreakdown bundle_cost(const Catalog& catalog, const Bundle& bundle, const UsageVector& usage,
                          std::string_view target_currency) {
  const CurrencyTable& table = catalog.currency_table();
  table.rate(target_currency);  // reject unknown codes before doing any work

  auto missing = [](const std::string& id) {
    return invariant_error(fmt::format("offer '{}' is not in this catalog snapshot", id));
  };

  CostBreakdown base;
  // Pre-adjustment cost per offer id, for promotion matching.
  std::vector<std::pair<std::string, double>> offer_costs;

  if (bundle.compute_id) {
    const ComputeOffer* offer = catalog.find_compute(*bundle.compute_id);
    if (!offer) throw missing(*bundle.compute_id);
    base.compute = component_cost(*offer, usage);
    offer_costs.emplace_back(offer->id, base.compute);
  }
  if (bundle.storage_id) {
    const StorageOffer* offer = catalog.find_storage(*bundle.storage_id);
    if (!offer) throw missing(*bundle.storage_id);
    base.storage = component_cost(*offer, usage);
    offer_costs.emplace_back(offer->id, base.storage);
  }
  if (bundle.transfer_id) {
    const TransferOffer* offer = catalog.find_transfer(*bundle.transfer_id);
    if (!offer) throw missing(*bundle.transfer_id);
    base.transfer_in = tiered_cost(usage.data_upload, offer->inbound_tiers, offer->inbound_free_quota);
    base.transfer_out = tiered_cost(usage.data_download, offer->outbound_tiers, offer->outbound_free_quota);
    offer_costs.emplace_back(offer->id, base.transfer_in + base.transfer_out);
  }

  double adjustment = 0.0;
  for (const auto& promo : catalog.promotions()) {
    if (promo.valid_months < 1) continue;
    for (const auto& [id, cost] : offer_costs) {
      if (id != promo.offer_id) continue;
      adjustment -= promo.kind == PromotionKind::PercentDiscount ? cost * promo.value / 100.0
                                                                 : std::min(promo.value, cost);
    }
  }

  auto convert = [&](double amount) {
    return convert_currency(amount, table.base_code, target_currency, table);
  };

  CostBreakdown out;
  out.currency = std::string(target_currency);
  out.compute = convert(base.compute);
  out.storage = convert(base.storage);
  out.transfer_in = convert(base.transfer_in);
  out.transfer_out = convert(base.transfer_out);
  const double pre = out.pre_adjustment();
  out.promotion_adjustment = std::max(convert(adjustment), -pre);
  out.total = pre + out.promotion_adjustment;
  return out;
}

}  // namespace cloudsel
