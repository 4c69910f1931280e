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

#ifndef CLOUDSEL_COST_ENGINE_HPP
#define CLOUDSEL_COST_ENGINE_HPP

#include <span>
#include <string>
#include <string_view>

#include "cloudsel/bundle.hpp"
#include "cloudsel/catalog.hpp"

namespace cloudsel {

inline constexpr int kDaysPerBillingMonth = 31;

/// Monthly demand for one bundle.
struct UsageVector {
  double storage = 0.0;        // GB held
  int duration_days = kDaysPerBillingMonth;
  double data_upload = 0.0;    // GB inbound
  double data_download = 0.0;  // GB outbound
  int vm_count = 1;
  double vm_hours_per_day = 24.0;
};

/// Throws bad_request naming the offending field (REST parameter names).
void validate_usage(const UsageVector& usage);

struct CostBreakdown {
  double compute = 0.0;
  double storage = 0.0;
  double transfer_in = 0.0;
  double transfer_out = 0.0;
  double promotion_adjustment = 0.0;  // <= 0
  double total = 0.0;
  std::string currency;

  double pre_adjustment() const { return compute + storage + transfer_in + transfer_out; }
};

/// Graduated pricing: the first `free_quota` GB are free and the remaining
/// billable quantity is laid onto the tiers from 0 upwards, each slice
/// billed at its own tier's rate. Throws invariant_error on malformed tiers.
double tiered_cost(double usage, std::span<const PriceTier> tiers, double free_quota);

/// Billed VM hours per VM: whole hours, rounded up.
double billed_hours(const UsageVector& usage);

double component_cost(const ComputeOffer& offer, const UsageVector& usage);
double component_cost(const StorageOffer& offer, const UsageVector& usage);
double component_cost(const TransferOffer& offer, const UsageVector& usage);

double convert_currency(double amount, std::string_view from, std::string_view to,
                        const CurrencyTable& table);

/// Sums component costs, applies promotions of the bundle's offers and
/// converts the result into `target_currency`. Throws bad_request for an
/// unknown currency and invariant_error for offers missing from `catalog`.
CostBreakdown bundle_cost(const Catalog& catalog, const Bundle& bundle, const UsageVector& usage,
                          std::string_view target_currency);

}  // namespace cloudsel

#endif  // CLOUDSEL_COST_ENGINE_HPP
